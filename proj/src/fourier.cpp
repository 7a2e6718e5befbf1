#include "kvnlab/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "kvnlab/errors.hpp"

namespace kvnlab {
namespace {

constexpr double kPi = 3.14159265358979323846;

// One cached FFTW plan per (n, sign), executed through its own buffers under a
// lock. FFTW_ESTIMATE keeps plan selection deterministic across runs, which the
// CLI's byte-identical-output contract relies on.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    void execute(std::vector<Complex>& data, int sign) {
        const std::size_t n = data.size();
        std::lock_guard<std::mutex> lock(mutex_);
        Entry& e = entry(n, sign);
        auto* buf = reinterpret_cast<Complex*>(e.buffer);
        for (std::size_t i = 0; i < n; ++i) buf[i] = data[i];
        fftw_execute(e.plan);
        for (std::size_t i = 0; i < n; ++i) data[i] = buf[i];
    }

private:
    struct Entry {
        fftw_plan plan = nullptr;
        fftw_complex* buffer = nullptr;
    };

    Entry& entry(std::size_t n, int sign) {
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        Entry e;
        e.buffer = fftw_alloc_complex(n);
        e.plan = fftw_plan_dft_1d(static_cast<int>(n), e.buffer, e.buffer, sign, FFTW_ESTIMATE);
        if (!e.plan) throw DataError("fftw plan creation failed");
        return plans_.emplace(key, e).first->second;
    }

    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, Entry> plans_;
};

// Forward transform core: out_k = scale * exp(-i k_k x_min / hbar)
//                                 * sum_j in_j (-1)^j exp(-2*pi*i j k / n).
// The (-1)^j factor re-centers the conjugate grid at zero.
void transform_axis(std::vector<Complex>& v, const Grid1D& x_grid, const Grid1D& k_grid,
                    double hbar, bool forward) {
    const std::size_t n = v.size();
    if (forward) {
        for (std::size_t j = 1; j < n; j += 2) v[j] = -v[j];
        PlanCache::instance().execute(v, FFTW_FORWARD);
        const double scale = x_grid.spacing() / std::sqrt(2.0 * kPi * hbar);
        for (std::size_t k = 0; k < n; ++k) {
            const double phase = -k_grid.point(k) * x_grid.x_min / hbar;
            v[k] *= scale * Complex{std::cos(phase), std::sin(phase)};
        }
    } else {
        const double scale = k_grid.spacing() / std::sqrt(2.0 * kPi * hbar);
        for (std::size_t k = 0; k < n; ++k) {
            const double phase = k_grid.point(k) * x_grid.x_min / hbar;
            v[k] *= scale * Complex{std::cos(phase), std::sin(phase)};
        }
        PlanCache::instance().execute(v, FFTW_BACKWARD);
        for (std::size_t j = 1; j < n; j += 2) v[j] = -v[j];
    }
}

void check_conjugate_pair(const Grid1D& x_grid, const Grid1D& k_grid, double hbar,
                          const char* who) {
    const Grid1D expected = conjugate_grid(x_grid, hbar);
    const double tol = 1e-9 * (std::abs(expected.x_max) + 1.0);
    if (k_grid.n != expected.n || std::abs(k_grid.x_min - expected.x_min) > tol ||
        std::abs(k_grid.x_max - expected.x_max) > tol)
        throw ParameterError(std::string(who) + ": grid is not conjugate to the target grid");
}

} // namespace

ComplexField1D dft_x_to_p(const ComplexField1D& f, double hbar) {
    if (!(hbar > 0.0)) throw ParameterError("dft_x_to_p: hbar must be positive");
    ComplexField1D out(conjugate_grid(f.grid, hbar), f.values);
    transform_axis(out.values, f.grid, out.grid, hbar, true);
    return out;
}

ComplexField1D idft_p_to_x(const ComplexField1D& f, double hbar, const Grid1D& x_grid) {
    if (!(hbar > 0.0)) throw ParameterError("idft_p_to_x: hbar must be positive");
    check_conjugate_pair(x_grid, f.grid, hbar, "idft_p_to_x");
    ComplexField1D out(x_grid, f.values);
    transform_axis(out.values, x_grid, f.grid, hbar, false);
    return out;
}

namespace {

// Shared 1D-along-axes driver for the 2D transforms.
ComplexField2D transform2(const ComplexField2D& f, const Grid2D& x_grids, const Grid2D& k_grids,
                          bool forward) {
    const std::size_t nq = x_grids.q_axis.n;
    const std::size_t np = x_grids.p_axis.n;
    ComplexField2D out(forward ? k_grids : x_grids, f.values);

    std::vector<Complex> col(nq);
    // Along p (contiguous rows), then along q (strided columns).
    for (std::size_t iq = 0; iq < nq; ++iq) {
        std::vector<Complex> row(out.values.begin() + iq * np, out.values.begin() + (iq + 1) * np);
        transform_axis(row, x_grids.p_axis, k_grids.p_axis, 1.0, forward);
        std::copy(row.begin(), row.end(), out.values.begin() + iq * np);
    }
    for (std::size_t ip = 0; ip < np; ++ip) {
        for (std::size_t iq = 0; iq < nq; ++iq) col[iq] = out.values[iq * np + ip];
        transform_axis(col, x_grids.q_axis, k_grids.q_axis, 1.0, forward);
        for (std::size_t iq = 0; iq < nq; ++iq) out.values[iq * np + ip] = col[iq];
    }
    return out;
}

} // namespace

ComplexField2D dft2_phi_to_lambda(const ComplexField2D& f) {
    Grid2D lambda_grid(conjugate_grid(f.grid.q_axis, 1.0), conjugate_grid(f.grid.p_axis, 1.0));
    return transform2(f, f.grid, lambda_grid, true);
}

ComplexField2D idft2_lambda_to_phi(const ComplexField2D& f, const Grid2D& phi_grid) {
    check_conjugate_pair(phi_grid.q_axis, f.grid.q_axis, 1.0, "idft2_lambda_to_phi");
    check_conjugate_pair(phi_grid.p_axis, f.grid.p_axis, 1.0, "idft2_lambda_to_phi");
    return transform2(f, phi_grid, f.grid, false);
}

ComplexField1D apply_conjugate_multiplier(const ComplexField1D& f, double hbar,
                                          const std::function<Complex(double)>& g) {
    ComplexField1D bar = dft_x_to_p(f, hbar);
    for (std::size_t k = 0; k < bar.values.size(); ++k) bar.values[k] *= g(bar.grid.point(k));
    return idft_p_to_x(bar, hbar, f.grid);
}

ComplexField1D spectral_lambda_apply(const ComplexField1D& f) {
    return apply_conjugate_multiplier(f, 1.0, [](double lam) { return Complex{lam, 0.0}; });
}

double spectral_tail_mass(const ComplexField1D& f, double band_fraction) {
    ComplexField1D bar = dft_x_to_p(f, 1.0);
    const double cutoff = band_fraction * bar.grid.x_max;
    double tail = 0.0, total = 0.0;
    for (std::size_t k = 0; k < bar.values.size(); ++k) {
        const double m = std::norm(bar.values[k]);
        total += m;
        if (std::abs(bar.grid.point(k)) >= cutoff) tail += m;
    }
    return total > 0.0 ? tail / total : 0.0;
}

void roll_inplace(std::vector<Complex>& row, long long k) {
    const long long n = static_cast<long long>(row.size());
    k %= n;
    if (k < 0) k += n;
    if (k == 0) return;
    std::rotate(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n - k), row.end());
}

void fourier_shift_inplace(std::vector<Complex>& row, const Grid1D& grid, double displacement) {
    const std::size_t n = row.size();
    const double cells = displacement / grid.spacing();
    const double nearest = std::round(cells);
    if (std::abs(cells - nearest) < 1e-12) {
        roll_inplace(row, static_cast<long long>(nearest));
        return;
    }
    const Grid1D k_grid = conjugate_grid(grid, 1.0);
    PlanCache::instance().execute(row, FFTW_FORWARD);
    // Plain FFT layout: index j holds frequency 2*pi*j/(n dx) with wraparound.
    const double dk = k_grid.spacing();
    for (std::size_t j = 0; j < n; ++j) {
        const double k = dk * (j < n / 2 ? static_cast<double>(j)
                                         : static_cast<double>(j) - static_cast<double>(n));
        const double phase = -k * displacement;
        row[j] *= Complex{std::cos(phase), std::sin(phase)} / static_cast<double>(n);
    }
    PlanCache::instance().execute(row, FFTW_BACKWARD);
}

} // namespace kvnlab
