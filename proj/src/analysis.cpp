#include "kvnlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kvnlab/errors.hpp"

namespace kvnlab {

Moments moments(const RealField1D& density) {
    double peak = 0.0;
    for (double v : density.values) {
        if (!std::isfinite(v)) throw DataError("moments: density has non-finite entries");
        peak = std::max(peak, std::abs(v));
    }
    const double neg_tol = 1e-12 * std::max(1.0, peak);
    for (double v : density.values)
        if (v < -neg_tol)
            throw DataError("moments: density is negative beyond tolerance (min entry " +
                            std::to_string(*std::min_element(density.values.begin(),
                                                             density.values.end())) + ")");

    const double total = integral(density);
    if (std::abs(total - 1.0) > 1e-6)
        throw DataError("moments: density integrates to " + std::to_string(total) +
                        ", not a normalized probability density");

    const double dx = density.grid.spacing();
    double m1 = 0.0;
    for (std::size_t i = 0; i < density.values.size(); ++i)
        m1 += density.grid.point(i) * density.values[i];
    m1 *= dx / total;

    double m2 = 0.0;
    for (std::size_t i = 0; i < density.values.size(); ++i) {
        const double d = density.grid.point(i) - m1;
        m2 += d * d * density.values[i];
    }
    m2 *= dx / total;
    return Moments{m1, m2};
}

namespace {

struct Segment {
    double value;
    std::size_t first;
    std::size_t last;
};

} // namespace

std::vector<Extremum> local_extrema(const RealField1D& density, double contrast_threshold) {
    if (!(contrast_threshold > 0.0) || !(contrast_threshold < 1.0))
        throw ParameterError("local_extrema: contrast_threshold must lie in (0,1)");
    for (double v : density.values)
        if (!std::isfinite(v)) throw DataError("local_extrema: density has non-finite entries");

    const std::size_t n = density.grid.n;
    std::vector<Segment> segs;
    for (std::size_t i = 0; i < n; ++i) {
        if (!segs.empty() && segs.back().value == density.values[i]) {
            segs.back().last = i;
        } else {
            segs.push_back({density.values[i], i, i});
        }
    }

    struct Candidate {
        std::size_t seg;
        ExtremumKind kind;
    };
    std::vector<Candidate> cands;
    for (std::size_t s = 1; s + 1 < segs.size(); ++s) {
        const double prev = segs[s - 1].value, cur = segs[s].value, next = segs[s + 1].value;
        if (cur > prev && cur > next) cands.push_back({s, ExtremumKind::Maximum});
        else if (cur < prev && cur < next) cands.push_back({s, ExtremumKind::Minimum});
    }

    std::vector<Extremum> out;
    for (std::size_t j = 0; j < cands.size(); ++j) {
        const Segment& seg = segs[cands[j].seg];
        const double v = seg.value;
        // Neighbor reference: adjacent opposite extrema, with the array ends
        // standing in where the alternating sequence runs out.
        const double left = (j > 0) ? segs[cands[j - 1].seg].value : density.values.front();
        const double right = (j + 1 < cands.size()) ? segs[cands[j + 1].seg].value
                                                    : density.values.back();
        double contrast = 0.0;
        if (cands[j].kind == ExtremumKind::Maximum) {
            const double ref = std::max(left, right);
            if (v <= 0.0) continue;
            contrast = (v - ref) / v;
        } else {
            const double ref = std::max(left, right);
            if (ref <= 0.0) continue;
            contrast = (ref - v) / ref;
        }
        if (contrast <= contrast_threshold) continue;
        const double pos = 0.5 * (density.grid.point(seg.first) + density.grid.point(seg.last));
        out.push_back(Extremum{pos, cands[j].kind, v, contrast});
    }
    return out;
}

} // namespace kvnlab
