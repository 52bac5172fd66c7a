#pragma once

#include "hermite/constants.hpp"
#include "hermite/sos.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hermite {

// Sums of squares modulo 4O: a necessary local condition for representations.
class LocalFilter {
public:
    explicit LocalFilter(const Field& field);
    bool element_admissible(const FieldElement& a) const;
    bool binary_admissible(const FieldMatrix& b) const;

private:
    std::size_t key(const FieldElement& a) const;
    const Field* field_;
    std::vector<bool> elements_;
    std::vector<bool> binaries_;
};

// Totally positive elements of O with trace exactly t.
std::vector<FieldElement> totally_positive_with_trace(const Field& field, long t);

struct REffReport {
    long r_eff = 1;
    long sweep_hi = 0;
    std::size_t tested = 0;
    std::size_t skipped = 0;  // locally inadmissible elements
    std::vector<FieldElement> failures;
};
// Smallest r such that every admissible totally positive a with Tr(a) in
// [r, sweep_hi] has a five square representation.
REffReport calibrate_r_eff(const Field& field, long sweep_hi, const RepresentOptions& opts = {});

struct EllReport {
    int ell = 1;
    long corpus = 0;
    std::vector<std::string> log;  // one line per tried l
};
// Smallest l <= max_ell for which every admissible form p^l B of the corpus
// has a five square representation.
EllReport calibrate_ell(const Field& field, long p, int max_ell, long corpus, std::uint64_t seed,
                        const RepresentOptions& opts = {});

// Calibrated effective constants: r_eff and l_eff sweeps, then derive.
struct CalibrationParams {
    long r_sweep_hi = 40;
    int max_ell = 4;
    long ell_corpus = 24;
    std::uint64_t seed = 1;
    int nmax = 64;
    RepresentOptions represent;
};
EffectiveConstants calibrate(const Field& field, const CalibrationParams& params, std::string* report = nullptr);

} // namespace hermite
