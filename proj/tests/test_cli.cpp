#include "doctest.h"

#include "cli.hpp"

#include "hermite/constants.hpp"
#include "hermite/form.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using hermite::cli::run;

namespace {

const std::string dir = HERMITE_FIELD_DIR;

struct Result {
    int status;
    std::string out;
    std::string err;
};

Result call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int status = run(args, out, err);
    return {status, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / "hermite_cli_test" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("reduce reports the outer coefficients") {
    fs::path w = scratch("reduce");
    std::ofstream(w / "form.txt") << "2, 1\n1, 2\n";
    Result r = call({"reduce", "--mode", "hkz", dir + "/Q.field", (w / "form.txt").string()});
    CHECK(r.status == 0);
    CHECK(r.out.find("hkz yes") != std::string::npos);
    CHECK(r.out.find("outer 1 2\n") != std::string::npos);
    CHECK(r.out.find("outer 2 3/2\n") != std::string::npos);
    Result b = call({"reduce", "--mode", "balanced", dir + "/Q.field", (w / "form.txt").string()});
    CHECK(b.status == 0);
    CHECK(b.out.find("balanced yes") != std::string::npos);
}

TEST_CASE("constants table holds the sigma_2 enclosure") {
    Result r = call({"constants", "--field", dir + "/Q.field", "--nmax", "8"});
    REQUIRE(r.status == 0);
    auto pos = r.out.find("n 2\n  sigma ");
    REQUIRE(pos != std::string::npos);
    // 4/pi = 1.27323954473516268615...
    CHECK(r.out.compare(pos + 12, 21, "[1.273239544735162686") == 0);
    CHECK(r.out.find("validate ok") != std::string::npos);
}

TEST_CASE("constants write round trip") {
    fs::path w = scratch("constants");
    Result r = call({"constants", "--field", dir + "/Q-sqrt5.field", "--nmax", "4", "--write", (w / "c.txt").string(), "-o",
                     (w / "report.txt").string()});
    REQUIRE(r.status == 0);
    auto eff = hermite::read_constants_file((w / "c.txt").string());
    CHECK(eff.field_name == "Q-sqrt5");
    CHECK(eff.prime == 2);
}

TEST_CASE("exit codes by error class") {
    fs::path w = scratch("codes");
    std::ofstream(w / "form.txt") << "2, 1\n1, 2\n";
    std::ofstream(w / "indef.txt") << "1, 2\n2, 1\n";
    const std::string form = (w / "form.txt").string();
    CHECK(call({"reduce", "missing.field", form}).status == 2);
    CHECK(call({"reduce", dir + "/Q.field", (w / "absent.txt").string()}).status == 2);
    CHECK(call({"reduce", "--mode", "lll", dir + "/Q.field", form}).status == 2);
    CHECK(call({"verify", dir + "/Q.field", form, "--precision", "32"}).status == 2);
    CHECK(call({"frobnicate"}).status == 2);
    CHECK(call({"minvec", dir + "/Q-sqrt5.field", form, "--budget", "1"}).status == 3);
    CHECK(call({"sos", "--field", dir + "/Q.field", "--backbone", form}).status == 4);
    CHECK(call({"sos", "--field", dir + "/Q.field", "--target", "3", "--element", "7"}).status == 4);
    CHECK(call({"reduce", dir + "/Q.field", (w / "indef.txt").string()}).status != 0);
}

TEST_CASE("field names resolve through the environment") {
    fs::path w = scratch("env");
    std::ofstream(w / "form.txt") << "3, 1\n1, 3\n";
    setenv("HERMITE_FIELD_DIR", dir.c_str(), 1);
    Result r = call({"minvec", "Q-sqrt2", (w / "form.txt").string()});
    CHECK(r.status == 0);
    CHECK(r.out.find("minimum 9") != std::string::npos);
    unsetenv("HERMITE_FIELD_DIR");
    CHECK(call({"minvec", "Q-sqrt2", (w / "form.txt").string()}).status == 2);
}

TEST_CASE("sos modes") {
    fs::path w = scratch("sos");
    std::ofstream(w / "b.txt") << "2, 1\n1, 2\n";
    Result e = call({"sos", "--field", dir + "/Q.field", "--target", "4", "--element", "7"});
    CHECK(e.status == 0);
    Result b = call({"sos", "--field", dir + "/Q.field", "--target", "5", (w / "b.txt").string()});
    CHECK(b.status == 0);
    CHECK(b.out.find("verified yes") != std::string::npos);
    CHECK(call({"sos", "--field", dir + "/Q.field"}).status == 2);
}

TEST_CASE("corpus generation") {
    fs::path w = scratch("corpus");
    Result empty = call({"corpus", "--field", dir + "/Q.field", "--count", "0", "--out", (w / "empty").string()});
    CHECK(empty.status == 0);
    CHECK(slurp(w / "empty" / "manifest.txt") == "field Q\nn 2\ncount 0\n");

    for (const char* run_dir : {"a", "b"})
        REQUIRE(call({"corpus", "--field", dir + "/Q-sqrt2.field", "--n", "3", "--count", "10", "--seed", "9", "--out",
                      (w / run_dir).string()})
                    .status == 0);
    auto field = hermite::load_field_file(dir + "/Q-sqrt2.field");
    for (int i = 0; i < 10; ++i) {
        std::string name = "form_000" + std::to_string(i) + ".txt";
        CHECK(slurp(w / "a" / name) == slurp(w / "b" / name));
        hermite::GramForm q = hermite::read_form_file(*field, (w / "a" / name).string());
        CHECK(q.n() == 3);
        CHECK(hermite::is_positive_definite(q));
    }
    CHECK(slurp(w / "a" / "manifest.txt") == slurp(w / "b" / "manifest.txt"));
}

} // TEST_SUITE
