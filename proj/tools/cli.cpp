#include "cli.hpp"

#include "hermite/calibration.hpp"
#include "hermite/constants.hpp"
#include "hermite/errors.hpp"
#include "hermite/form.hpp"
#include "hermite/minima.hpp"
#include "hermite/reduction.hpp"
#include "hermite/sos.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace hermite::cli {

namespace {

namespace fs = std::filesystem;

constexpr int min_precision = 64;

struct RunConfig {
    std::string field;
    std::string input;
    std::string output;
    std::string constants;
    std::string mode = "hkz";
    long precision = default_precision;
    std::size_t budget = EnumOptions{}.budget;
    unsigned threads = 1;
};

// A path, or a bare name looked up as <dir>/<name>.field with dir taken from
// HERMITE_FIELD_DIR.
std::string resolve_field(const std::string& arg) {
    if (fs::exists(arg)) return arg;
    if (const char* dir = std::getenv("HERMITE_FIELD_DIR")) {
        fs::path p = fs::path(dir) / (arg + ".field");
        if (fs::exists(p)) return p.string();
    }
    fail(ErrorCode::InvalidInput, "field file not found: " + arg);
}

void require_file(const std::string& path) {
    require(fs::exists(path), ErrorCode::InvalidInput, "file not found: " + path);
}

EnumOptions enum_options(const RunConfig& cfg) {
    require(cfg.budget >= 1, ErrorCode::InvalidInput, "budget must be at least 1");
    return EnumOptions{cfg.budget, cfg.threads};
}

mpfr_prec_t precision(const RunConfig& cfg) {
    require(cfg.precision >= min_precision, ErrorCode::InvalidInput, "precision must be at least 64 bits");
    return static_cast<mpfr_prec_t>(cfg.precision);
}

// Explicit file, else the shipped <stem>.constants beside the field file,
// else a fresh derivation with default calibration data.
EffectiveConstants load_constants(const Field& field, const std::string& field_path, const RunConfig& cfg, int nmax) {
    if (!cfg.constants.empty()) {
        require_file(cfg.constants);
        return read_constants_file(cfg.constants);
    }
    fs::path beside = fs::path(field_path).replace_extension(".constants");
    if (fs::exists(beside)) return read_constants_file(beside.string());
    return ConstantsTable::derive(field, default_prime(field), 1, 1, nmax, precision(cfg));
}

void emit(const std::string& text, const RunConfig& cfg, std::ostream& out) {
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    std::ofstream file(cfg.output, std::ios::binary);
    require(static_cast<bool>(file), ErrorCode::InvalidInput, "cannot write " + cfg.output);
    file << text;
    out << "wrote " << cfg.output << '\n';
}

std::string header(const Field& field, const GramForm& q) {
    std::ostringstream s;
    s << "field " << field.name() << '\n' << "n " << q.n() << '\n';
    return s.str();
}

int cmd_reduce(const RunConfig& cfg, std::ostream& out) {
    require(cfg.mode == "hkz" || cfg.mode == "balanced", ErrorCode::InvalidInput, "mode must be hkz or balanced");
    const std::string path = resolve_field(cfg.field);
    auto field = load_field_file(path);
    require_file(cfg.input);
    GramForm q = read_form_file(*field, cfg.input);
    EnumOptions eo = enum_options(cfg);
    ReductionResult r = cfg.mode == "hkz" ? hkz_reduce(q, eo) : balanced_hkz_reduce(q, eo);
    ConstantsTable table(*field, load_constants(*field, path, cfg, static_cast<int>(std::max<std::size_t>(q.n(), 16))),
                         precision(cfg));
    Certificate c = verify(r.reduced, table, eo);
    std::ostringstream s;
    s << header(*field, q) << "mode " << to_string(r.mode) << '\n';
    s << "transform\n" << format_field_matrix(r.transform);
    s << "reduced\n" << format_field_matrix(r.reduced.entries());
    s << format_certificate(c);
    emit(s.str(), cfg, out);
    return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    const std::string path = resolve_field(cfg.field);
    auto field = load_field_file(path);
    require_file(cfg.input);
    GramForm q = read_form_file(*field, cfg.input);
    ConstantsTable table(*field, load_constants(*field, path, cfg, static_cast<int>(std::max<std::size_t>(q.n(), 16))),
                         precision(cfg));
    Certificate c = verify(q, table, enum_options(cfg));
    emit(header(*field, q) + format_certificate(c), cfg, out);
    return 0;
}

int cmd_minvec(const RunConfig& cfg, std::ostream& out) {
    auto field = load_field_file(resolve_field(cfg.field));
    require_file(cfg.input);
    GramForm q = read_form_file(*field, cfg.input);
    ShortVectorReport rep = minimum(q, enum_options(cfg));
    HermiteReport h = hermite_check(q, rep);
    std::ostringstream s;
    s << header(*field, q) << "minimum " << format_rational(rep.minimum) << '\n' << "witness";
    for (std::size_t i = 0; i < rep.witness.size(); ++i) s << (i ? ", " : " ") << format_element(rep.witness[i]);
    s << '\n' << "search_bound " << format_rational(rep.search_bound) << '\n';
    s << "candidates " << rep.candidates << '\n';
    s << "det_norm " << format_rational(h.det_norm) << '\n';
    s << "sigma " << h.sigma.format() << '\n';
    s << "hermite_ratio " << h.ratio.format() << '\n';
    emit(s.str(), cfg, out);
    return 0;
}

struct ConstantsArgs {
    int nmax = 16;
    long prime = 0;
    int ell = 0;
    long r_eff = 0;
    bool calibrate = false;
    std::string write;
};

int cmd_constants(const RunConfig& cfg, const ConstantsArgs& a, std::ostream& out) {
    require(a.nmax >= 1, ErrorCode::InvalidInput, "nmax must be positive");
    const std::string path = resolve_field(cfg.field);
    auto field = load_field_file(path);
    const mpfr_prec_t prec = precision(cfg);
    std::string calibration;
    EffectiveConstants eff;
    if (a.calibrate) {
        CalibrationParams params;
        params.nmax = a.nmax;
        eff = calibrate(*field, params, &calibration);
    } else if (a.prime == 0 && a.ell == 0 && a.r_eff == 0) {
        eff = load_constants(*field, path, cfg, a.nmax);
        if (eff.nmax < a.nmax)
            eff = ConstantsTable::derive(*field, eff.prime, eff.ell, eff.r_eff, a.nmax, prec);
    } else {
        long p = a.prime ? a.prime : default_prime(*field);
        EffectiveConstants base = load_constants(*field, path, cfg, a.nmax);
        eff = ConstantsTable::derive(*field, p, a.ell ? a.ell : base.ell, a.r_eff ? a.r_eff : base.r_eff, a.nmax, prec);
    }
    if (!a.write.empty()) {
        std::ofstream file(a.write, std::ios::binary);
        require(static_cast<bool>(file), ErrorCode::InvalidInput, "cannot write " + a.write);
        file << format_constants(eff);
    }
    ConstantsTable t(*field, eff, prec);
    std::ostringstream s;
    s << calibration << format_constants(eff);
    s << "beta " << t.beta().format() << '\n';
    s << "lambda " << format_rational(t.lambda()) << '\n';
    s << "gamma " << t.gamma().get_str() << '\n';
    s << "d2 " << t.d2().format() << '\n';
    s << "d3 " << t.d3().format() << '\n';
    for (int n = 1; n <= a.nmax; ++n) {
        s << "n " << n << '\n';
        s << "  sigma " << t.sigma(n).format() << '\n';
        s << "  alpha_bar " << t.alpha_bar(n).format() << '\n';
        s << "  c_bar " << t.c_bar(n).format() << '\n';
        s << "  g_bound " << t.g_bound(n).get_str() << '\n';
        if (n >= 2) {
            Thresholds th = t.thresholds(n);
            s << "  threshold " << th.max.format() << '\n';
        }
    }
    auto bad = t.validate();
    s << "validate " << (bad ? *bad : std::string("ok")) << '\n';
    emit(s.str(), cfg, out);
    return bad ? exit_code(ErrorCode::InvariantBreach) : 0;
}

struct SosArgs {
    int target = 0;
    bool backbone = false;
    std::string element;
};

int cmd_sos(const RunConfig& cfg, const SosArgs& a, std::ostream& out) {
    const std::string path = resolve_field(cfg.field);
    auto field = load_field_file(path);
    RepresentOptions ro{cfg.budget};
    std::ostringstream s;
    s << "field " << field->name() << '\n';
    if (a.backbone) {
        require_file(cfg.input);
        GramForm q = read_form_file(*field, cfg.input);
        ConstantsTable table(*field, load_constants(*field, path, cfg, static_cast<int>(std::max<std::size_t>(q.n(), 16))),
                             precision(cfg));
        BackboneOptions bo{enum_options(cfg), ro};
        SosWitness w = backbone(q, table, bo);
        s << "mode backbone\n" << format_witness(w);
        s << "verified " << (verify_sos(q, w) ? "yes" : "no") << '\n';
        emit(s.str(), cfg, out);
        return 0;
    }
    require(a.target >= 1, ErrorCode::InvalidInput, "--target k or --backbone is required");
    if (!a.element.empty()) {
        FieldElement x = parse_element(*field, a.element);
        auto w = represent_element(x, a.target, ro);
        s << "mode element\n" << "target " << a.target << '\n' << "element " << format_element(x) << '\n';
        if (!w) {
            s << "result not_found\n";
            emit(s.str(), cfg, out);
            return exit_code(ErrorCode::WitnessNotFound);
        }
        for (const auto& c : *w) s << format_element(c) << '\n';
        emit(s.str(), cfg, out);
        return 0;
    }
    require_file(cfg.input);
    FieldMatrix b = read_field_matrix_file(*field, cfg.input);
    auto m = represent_binary(b, a.target, ro);
    s << "mode binary\n" << "target " << a.target << '\n';
    if (!m) {
        s << "result not_found\n";
        emit(s.str(), cfg, out);
        return exit_code(ErrorCode::WitnessNotFound);
    }
    s << format_field_matrix(*m);
    s << "verified " << (multiply(transpose(*m), *m) == b ? "yes" : "no") << '\n';
    emit(s.str(), cfg, out);
    return 0;
}

struct CorpusArgs {
    std::size_t n = 2;
    long count = 10;
    std::uint64_t seed = 1;
    long entry_bound = 2;
    long shift_bound = 2;
    std::string dir;
};

int cmd_corpus(const RunConfig& cfg, const CorpusArgs& a, std::ostream& out) {
    require(a.n >= 1 && a.count >= 0, ErrorCode::InvalidInput, "corpus needs n >= 1 and count >= 0");
    require(!a.dir.empty(), ErrorCode::InvalidInput, "--out directory is required");
    auto field = load_field_file(resolve_field(cfg.field));
    fs::create_directories(a.dir);
    std::ostringstream manifest;
    manifest << "field " << field->name() << '\n' << "n " << a.n << '\n' << "count " << a.count << '\n';
    for (long i = 0; i < a.count; ++i) {
        const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(i);
        GramForm q = random_pd_form(*field, a.n, seed, {a.entry_bound, a.shift_bound});
        require(is_positive_definite(q), ErrorCode::InvariantBreach, "corpus form is not positive definite");
        std::ostringstream name;
        name << "form_" << std::setw(4) << std::setfill('0') << i << ".txt";
        std::ofstream file(fs::path(a.dir) / name.str(), std::ios::binary);
        require(static_cast<bool>(file), ErrorCode::InvalidInput, "cannot write into " + a.dir);
        file << "# seed " << seed << '\n' << format_field_matrix(q.entries());
        manifest << name.str() << " seed " << seed << " pd yes\n";
    }
    std::ofstream file(fs::path(a.dir) / "manifest.txt", std::ios::binary);
    require(static_cast<bool>(file), ErrorCode::InvalidInput, "cannot write into " + a.dir);
    file << manifest.str();
    out << manifest.str();
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reduction, constants and sums of squares for forms over totally real fields", "hermite"};
    app.require_subcommand(1);
    RunConfig cfg;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--precision", cfg.precision, "interval precision in bits (>= 64)");
        sub->add_option("--budget", cfg.budget, "enumeration budget in nodes");
        sub->add_option("--threads", cfg.threads, "enumeration worker threads");
        sub->add_option("-o,--output", cfg.output, "write the report to a file");
        sub->add_option("--constants", cfg.constants, "constants file (default: beside the field file)");
    };

    auto* reduce = app.add_subcommand("reduce", "HKZ or balanced HKZ reduction with a certificate");
    reduce->add_option("--mode", cfg.mode, "hkz or balanced");
    reduce->add_option("field", cfg.field, "field file or name")->required();
    reduce->add_option("form", cfg.input, "form file")->required();
    common(reduce);

    auto* verify_cmd = app.add_subcommand("verify", "certify the reduction level of a form");
    verify_cmd->add_option("field", cfg.field, "field file or name")->required();
    verify_cmd->add_option("form", cfg.input, "form file")->required();
    common(verify_cmd);

    auto* minvec = app.add_subcommand("minvec", "exact minimum and a minimal vector");
    minvec->add_option("field", cfg.field, "field file or name")->required();
    minvec->add_option("form", cfg.input, "form file")->required();
    common(minvec);

    ConstantsArgs ca;
    auto* constants = app.add_subcommand("constants", "table of constants and thresholds");
    constants->add_option("--field", cfg.field, "field file or name")->required();
    constants->add_option("--nmax", ca.nmax, "largest rank in the table");
    constants->add_option("--prime", ca.prime, "unramified prime (default: smallest)");
    constants->add_option("--ell", ca.ell, "exponent of the prime for rank-2 blocks");
    constants->add_option("--r-eff", ca.r_eff, "trace bound for five squares");
    constants->add_flag("--calibrate", ca.calibrate, "recalibrate r_eff and ell by sweeps");
    constants->add_option("--write", ca.write, "write the effective constants to a file");
    common(constants);

    SosArgs sa;
    auto* sos = app.add_subcommand("sos", "sum of squares representations");
    sos->add_option("--field", cfg.field, "field file or name")->required();
    sos->add_option("--target", sa.target, "number of squares for element or binary mode");
    sos->add_flag("--backbone", sa.backbone, "full pipeline on a form file");
    sos->add_option("--element", sa.element, "element literal for element mode");
    sos->add_option("input", cfg.input, "form or 2 x 2 matrix file");
    common(sos);

    CorpusArgs co;
    auto* corpus = app.add_subcommand("corpus", "deterministic positive definite corpus");
    corpus->add_option("--field", cfg.field, "field file or name")->required();
    corpus->add_option("--n", co.n, "rank");
    corpus->add_option("--count", co.count, "number of forms");
    corpus->add_option("--seed", co.seed, "first seed");
    corpus->add_option("--entry-bound", co.entry_bound, "coordinate bound for M");
    corpus->add_option("--shift-bound", co.shift_bound, "coordinate bound for the diagonal shift");
    corpus->add_option("--out", co.dir, "output directory")->required();
    common(corpus);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(ErrorCode::InvalidInput);
    }

    try {
        if (reduce->parsed()) return cmd_reduce(cfg, out);
        if (verify_cmd->parsed()) return cmd_verify(cfg, out);
        if (minvec->parsed()) return cmd_minvec(cfg, out);
        if (constants->parsed()) return cmd_constants(cfg, ca, out);
        if (sos->parsed()) return cmd_sos(cfg, sa, out);
        if (corpus->parsed()) return cmd_corpus(cfg, co, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(ErrorCode::InvariantBreach);
    }
    return exit_code(ErrorCode::InvalidInput);
}

} // namespace hermite::cli
