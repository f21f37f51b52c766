#include "rotconv/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace rotconv {

namespace {

// FFTW planning is not thread-safe; execution through the new-array
// interface is. Plans are created once per shape under a lock and shared.
struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanPtr = std::unique_ptr<fftw_plan_s, PlanDeleter>;

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  // dims = {nx, ny, nz} for 3D, {n, 0, 0} for 1D.
  fftw_plan get(int nx, int ny, int nz, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(nx, ny, nz, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second.get();

    const std::size_t n = static_cast<std::size_t>(nx) * (ny > 0 ? ny : 1) * (nz > 0 ? nz : 1);
    std::vector<Complex> in(n), out(n);
    auto* pin = reinterpret_cast<fftw_complex*>(in.data());
    auto* pout = reinterpret_cast<fftw_complex*>(out.data());
    // FFTW_ESTIMATE keeps the chosen algorithm, and so the rounding, identical
    // from run to run.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = ny > 0 ? fftw_plan_dft_3d(nx, ny, nz, pin, pout, sign, flags)
                         : fftw_plan_dft_1d(nx, pin, pout, sign, flags);
    if (p == nullptr) throw std::runtime_error("fftw: plan creation failed");
    plans_.emplace(key, PlanPtr(p));
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int, int>, PlanPtr> plans_;
};

void execute(fftw_plan plan, const std::vector<Complex>& in, std::vector<Complex>& out) {
  // new-array execute never writes to the input of an out-of-place plan
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

std::vector<Complex> backward_raw(const SpectralField& F) {
  const Grid& g = F.grid();
  std::vector<Complex> in(F.coeffs().begin(), F.coeffs().end());
  std::vector<Complex> out(g.size());
  execute(PlanCache::instance().get(g.nx(), g.ny(), g.nz(), FFTW_BACKWARD), in, out);
  return out;
}

}  // namespace

SpectralField forward_transform(const PhysicalField& f) {
  if (!f.all_finite()) {
    throw std::invalid_argument("forward_transform: non-finite input");
  }
  const Grid& g = f.grid();
  std::vector<Complex> in(g.size());
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = f[i];
  std::vector<Complex> out(g.size());
  execute(PlanCache::instance().get(g.nx(), g.ny(), g.nz(), FFTW_FORWARD), in, out);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (auto& c : out) c *= scale;
  return SpectralField(g, std::move(out));
}

PhysicalField inverse_transform(const SpectralField& F) {
  const double defect = F.symmetry_defect();
  if (!(defect <= 1e-12 * F.max_abs())) {
    throw std::invalid_argument("inverse_transform: coefficients are not conjugate-symmetric");
  }
  return inverse_transform_unchecked(F);
}

PhysicalField inverse_transform_unchecked(const SpectralField& F) {
  auto raw = backward_raw(F);
  std::vector<double> values(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) values[i] = raw[i].real();
  return PhysicalField(F.grid(), std::move(values));
}

std::pair<PhysicalField, PhysicalField> inverse_transform_pair(const SpectralField& F,
                                                               const SpectralField& G) {
  require_same_grid(F.grid(), G.grid(), "inverse_transform_pair");
  const Grid& g = F.grid();
  std::vector<Complex> in(g.size());
  const Complex I{0.0, 1.0};
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = F[i] + I * G[i];
  std::vector<Complex> out(g.size());
  execute(PlanCache::instance().get(g.nx(), g.ny(), g.nz(), FFTW_BACKWARD), in, out);
  std::vector<double> f(g.size()), h(g.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    f[i] = out[i].real();
    h[i] = out[i].imag();
  }
  return {PhysicalField(g, std::move(f)), PhysicalField(g, std::move(h))};
}

std::vector<Complex> forward_transform_1d(std::span<const double> profile) {
  if (profile.empty()) throw std::invalid_argument("forward_transform_1d: empty profile");
  const int n = static_cast<int>(profile.size());
  std::vector<Complex> in(profile.begin(), profile.end());
  std::vector<Complex> out(in.size());
  execute(PlanCache::instance().get(n, 0, 0, FFTW_FORWARD), in, out);
  for (auto& c : out) c /= static_cast<double>(n);
  return out;
}

std::vector<double> inverse_transform_1d(std::span<const Complex> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("inverse_transform_1d: empty profile");
  const int n = static_cast<int>(coeffs.size());
  std::vector<Complex> in(coeffs.begin(), coeffs.end());
  std::vector<Complex> out(in.size());
  execute(PlanCache::instance().get(n, 0, 0, FFTW_BACKWARD), in, out);
  std::vector<double> values(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) values[i] = out[i].real();
  return values;
}

}  // namespace rotconv
