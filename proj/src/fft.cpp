#include "kato/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace kato {

namespace {

//==============================================================================
// Plan cache.  FFTW planning is not thread safe; execution with new arrays is.
//==============================================================================

struct PlanKey {
    std::vector<int> dims;
    int sign;
    bool operator<(const PlanKey& o) const { return std::tie(dims, sign) < std::tie(o.dims, o.sign); }
};

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [k, p] : plans_) fftw_destroy_plan(p);
    }

    fftw_plan get(const std::vector<int>& dims, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        PlanKey key{dims, sign};
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::size_t total = 1;
        for (int d : dims) total *= static_cast<std::size_t>(d);
        fftw_complex* scratch = fftw_alloc_complex(total);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), scratch, scratch,
                                    sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, flags);
        fftw_free(scratch);
        if (!p) throw std::runtime_error("FFTW failed to create a plan");
        plans_.emplace(key, p);
        return p;
    }

private:
    std::mutex mu_;
    std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

// e^{-i x_0 xi_k} for the cell-centred origin x_0 = -L/2 + dx/2.
const cvec& origin_phase(std::size_t N) {
    static std::mutex mu;
    static std::map<std::size_t, cvec> tables;
    std::lock_guard<std::mutex> lock(mu);
    auto it = tables.find(N);
    if (it != tables.end()) return it->second;
    cvec t(N);
    const long half = static_cast<long>(N / 2);
    for (std::size_t k = 0; k < N; ++k) {
        const long s = static_cast<long>(k) < half ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(N);
        const double sgn = (s % 2 == 0) ? 1.0 : -1.0;
        t[k] = sgn * std::polar(1.0, -std::numbers::pi * static_cast<double>(s) / static_cast<double>(N));
    }
    return tables.emplace(N, std::move(t)).first->second;
}

void apply_origin_phase(const Grid& g, cplx* data, bool conjugate) {
    const cvec& ph = origin_phase(g.N);
    const std::size_t total = g.size();
    std::size_t idx[3];
    for (std::size_t i = 0; i < total; ++i) {
        g.unravel(i, idx);
        cplx p = 1.0;
        for (int a = 0; a < g.n; ++a) p *= ph[idx[a]];
        data[i] *= conjugate ? std::conj(p) : p;
    }
}

std::vector<int> grid_dims(const Grid& g) { return std::vector<int>(static_cast<std::size_t>(g.n), static_cast<int>(g.N)); }

}  // namespace

void fft_inplace(cplx* data, const std::vector<int>& dims, int sign) {
    fftw_plan p = cache().get(dims, sign);
    auto* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, d, d);
}

void dft_inplace(const Grid& g, cplx* data) {
    fft_inplace(data, grid_dims(g), -1);
    apply_origin_phase(g, data, false);
    const double w = g.cell_volume();
    for (std::size_t i = 0; i < g.size(); ++i) data[i] *= w;
}

void idft_inplace(const Grid& g, cplx* data) {
    apply_origin_phase(g, data, true);
    fft_inplace(data, grid_dims(g), +1);
    const double w = std::pow(1.0 / g.L, g.n);
    for (std::size_t i = 0; i < g.size(); ++i) data[i] *= w;
}

Field dft(const Field& f) {
    if (f.domain != Domain::space) throw std::invalid_argument("dft expects a space-side field");
    Field out(f.grid, f.data, Domain::frequency);
    dft_inplace(f.grid, out.data.data());
    return out;
}

Field idft(const Field& fhat) {
    if (fhat.domain != Domain::frequency) throw std::invalid_argument("idft expects a frequency-side field");
    Field out(fhat.grid, fhat.data, Domain::space);
    idft_inplace(fhat.grid, out.data.data());
    return out;
}

}  // namespace kato
