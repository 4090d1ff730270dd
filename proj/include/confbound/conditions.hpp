#pragma once

// Shared vocabulary for boundary conditions: per-condition results, options,
// and the paired approach sequences used by two-point conditions.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "extrapolation.hpp"
#include "maps.hpp"
#include "path.hpp"

namespace confbound {

struct ConditionResult {
    std::string id;
    Verdict verdict = Verdict::undecided;
    std::string rule;
    std::string evidence_csv;
};

struct BoundaryOptions {
    double ratio = 0.5;
    double start_offset = 0.5;
    int length = 48;
    double aperture = M_PI / 4;  // off-radial paths use +aperture and -aperture
    int shells = 32;
    double unimodular_tol = 1e-6;
    double limit_tol = 1e-7;
    double kernel_liminf_threshold = 1e-3;  // kernel conditions (c') and (c'')
    TrendThresholds trend;
    SeriesThresholds series;

    ApproachPath path(Complex sigma, double beta) const {
        return ApproachPath(sigma, beta, std::min(start_offset, 0.99 * 2.0 * std::cos(beta)), ratio,
                            length);
    }
};

// Two approach sequences sampled with an index rule for the second one.
struct PairFamily {
    enum class Index { same, half, logarithmic };
    std::string name;
    ApproachPath first;
    ApproachPath second;
    Index index;

    int partner(int n) const {
        switch (index) {
            case Index::same: return n;
            case Index::half: return n / 2;
            default: return static_cast<int>(std::ceil(std::log2(std::max(n, 1)))) + 2;
        }
    }
};

struct PairSample {
    int n;
    double depth;  // depth of the deeper point
    QComplex z;
    QComplex w;
};

inline std::vector<PairSample> pair_samples(const PairFamily& f, int n_min = 4) {
    std::vector<PairSample> out;
    for (int n = n_min; n < f.first.length(); ++n) {
        int m = f.partner(n);
        if (m >= f.second.length() || m < 0) continue;
        QComplex z = f.first.disk_point(n), w = f.second.disk_point(m);
        if (z == w) continue;
        out.push_back({n, f.first.depth(n), z, w});
    }
    return out;
}

// Families used by the two-point conditions. "cross" pairs points at equal
// depth on different apertures; "half" pairs depth n with depth n/2; "log"
// pairs depth n with depth log2(n) + 2.
inline std::vector<PairFamily> pair_families(Complex sigma, const BoundaryOptions& o, bool with_log) {
    ApproachPath radial = o.path(sigma, 0.0), up = o.path(sigma, o.aperture),
                 down = o.path(sigma, -o.aperture);
    std::vector<PairFamily> f{
        {"cross(0,+b)", radial, up, PairFamily::Index::same},
        {"cross(+b,-b)", up, down, PairFamily::Index::same},
        {"half(0,+b)", radial, up, PairFamily::Index::half},
        {"half(-b,0)", down, radial, PairFamily::Index::half},
    };
    if (with_log) {
        f.push_back({"log(0,-b)", radial, down, PairFamily::Index::logarithmic});
        f.push_back({"log(+b,0)", up, radial, PairFamily::Index::logarithmic});
    }
    return f;
}

// Combine family-wise verdicts for a condition quantified over all pairs:
// one failing family refutes it; it holds only if every family holds.
inline Decision combine_all(const std::vector<std::pair<std::string, Decision>>& parts) {
    for (auto& [name, d] : parts)
        if (d.verdict == Verdict::fails) return {Verdict::fails, d.rule + " along " + name};
    for (auto& [name, d] : parts)
        if (d.verdict != Verdict::holds) return {Verdict::undecided, d.rule + " along " + name};
    return {Verdict::holds, parts.empty() ? "no families" : parts.front().second.rule +
                                                                 " along all families"};
}

// Combine for an existential condition (a liminf along some approach).
inline Decision combine_any(const std::vector<std::pair<std::string, Decision>>& parts) {
    for (auto& [name, d] : parts)
        if (d.verdict == Verdict::holds) return {Verdict::holds, d.rule + " along " + name};
    for (auto& [name, d] : parts)
        if (d.verdict != Verdict::fails) return {Verdict::undecided, d.rule + " along " + name};
    return {Verdict::fails, parts.empty() ? "no families" : parts.front().second.rule +
                                                                " along all families"};
}

class EvidenceTable {
public:
    EvidenceTable() { out_ << "family,n,depth,value\n"; }
    void add(const std::string& family, int n, double depth, double value) {
        out_.precision(17);
        out_ << family << ',' << n << ',' << depth << ',' << value << '\n';
    }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

inline const SelfMap& require_disk_map(const SelfMap& m) {
    if (m.domain() != Domain::disk)
        throw std::invalid_argument("boundary analysis needs a disk map (use conjugate_to_disk)");
    return m;
}

}  // namespace confbound
