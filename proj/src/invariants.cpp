#include "rotconv/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "rotconv/mean_state.hpp"
#include "rotconv/norms.hpp"
#include "rotconv/transform.hpp"

namespace rotconv {

namespace {

// sup over collocation levels of the L^p(xy) norm of one horizontal slice.
double sup_slice_norm(const PhysicalField& f, double p) {
  const Grid& g = f.grid();
  const int nz = g.nz();
  std::vector<double> sums(nz, 0.0);
  const std::size_t slice = static_cast<std::size_t>(g.nx()) * g.ny();
  const bool six = p == 6.0;
  for (std::size_t col = 0; col < slice; ++col) {
    for (int l = 0; l < nz; ++l) {
      const double a = std::abs(f[col * nz + l]);
      if (p == 3.0 || six) {
        const double a3 = a * a * a;
        sums[l] += six ? a3 * a3 : a3;
      } else {
        sums[l] += std::pow(a, p);
      }
    }
  }
  const double area = g.dx() * g.dy();
  double sup = 0.0;
  for (double s : sums) sup = std::max(sup, std::pow(s * area, 1.0 / p));
  return sup;
}

SpectralField scaled(const SpectralField& F, const std::vector<double>& m) {
  SpectralField out(F.grid());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] * F[i];
  return out;
}

SpectralField times_ik(const SpectralField& F, int axis) {
  const Grid& g = F.grid();
  SpectralField out(g);
  g.for_each([&](std::size_t idx, int i, int j, int l) {
    if (g.is_nyquist(i, j, l)) return;
    const Wavevector k = g.wavevector(i, j, l);
    const int kj = axis == 0 ? k.k1 : (axis == 1 ? k.k2 : k.k3);
    out[idx] = Complex(0.0, kj) * F[idx];
  });
  return out;
}

struct Fields {
  PhysicalField theta, w, u, v, tx, ty, dxu, dxv, dxw;
};

Fields physical_fields(const SpectralField& theta, const VelocityMultipliers& m) {
  const Grid& g = theta.grid();
  std::vector<double> mu(g.size()), mv(g.size()), mw(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    mu[i] = m.mu(i);
    mv[i] = m.mv(i);
    mw[i] = m.mw(i);
  }
  const SpectralField U = scaled(theta, mu), V = scaled(theta, mv), W = scaled(theta, mw);
  auto [th, w] = inverse_transform_pair(theta, W);
  auto [u, v] = inverse_transform_pair(U, V);
  auto [tx, ty] = inverse_transform_pair(times_ik(theta, 0), times_ik(theta, 1));
  auto [dxu, dxv] = inverse_transform_pair(times_ik(U, 0), times_ik(V, 0));
  auto [dxw, unused] = inverse_transform_pair(times_ik(W, 0), SpectralField(g));
  return {std::move(th), std::move(w),   std::move(u),   std::move(v),  std::move(tx),
          std::move(ty), std::move(dxu), std::move(dxv), std::move(dxw)};
}

EmbeddingRatios ratios_from(const Fields& f, double l2, double l3, double l6) {
  EmbeddingRatios r;
  const PhysicalField* uv[] = {&f.u, &f.v};
  const PhysicalField* dxuv[] = {&f.dxu, &f.dxv};
  r.w_slice_l3 = sup_slice_norm(f.w, 3.0) / l2;
  r.w_slice_l6 = sup_slice_norm(f.w, 6.0) / l3;
  r.uv_l6 = lp_norm(uv, 6.0) / l6;
  r.w_l6 = lp_norm(f.w, 6.0) / l6;
  r.dx_uv_inf = lp_norm(dxuv, kInfinity) / l6;
  r.dx_w_inf = (lp_norm(f.dxw, kInfinity) + lp_norm(f.w, kInfinity)) / l6;
  return r;
}

void require_zero_mean(const SpectralField& theta, const char* what) {
  if (!theta.has_zero_horizontal_mean()) {
    throw std::invalid_argument(std::string(what) + ": theta must have zero horizontal mean");
  }
}

}  // namespace

double dual_norm(const SpectralField& theta) {
  require_zero_mean(theta, "dual_norm");
  const Grid& g = theta.grid();
  double s = 0.0;
  g.for_each([&](std::size_t idx, int i, int j, int l) {
    const Wavevector k = g.wavevector(i, j, l);
    if (k.horizontal_mean()) return;
    s += std::norm(theta[idx]) / k.horizontal_sq();
  });
  return std::sqrt(kDomainVolume * s);
}

ReportBuilder::ReportBuilder(const Grid& grid) : grid_(grid), mult_(grid) {}

EmbeddingRatios ReportBuilder::ratios(const SpectralField& theta) const {
  require_same_grid(grid_, theta.grid(), "embedding_ratios");
  require_zero_mean(theta, "embedding_ratios");
  if (theta.max_abs() == 0.0) throw std::invalid_argument("embedding_ratios: zero field");
  const Fields f = physical_fields(theta, mult_);
  return ratios_from(f, lp_norm(f.theta, 2.0), lp_norm(f.theta, 3.0), lp_norm(f.theta, 6.0));
}

InvariantReport ReportBuilder::operator()(const SpectralField& theta, double t,
                                          double epsilon) const {
  require_same_grid(grid_, theta.grid(), "compute_report");
  require_zero_mean(theta, "compute_report");
  const Fields f = physical_fields(theta, mult_);
  InvariantReport r;
  r.t = t;
  r.l2 = lp_norm(f.theta, 2.0);
  r.l3 = lp_norm(f.theta, 3.0);
  r.l6 = lp_norm(f.theta, 6.0);
  const PhysicalField* grad[] = {&f.tx, &f.ty};
  r.grad_l3 = lp_norm(grad, 3.0);
  r.dual = dual_norm(theta);
  const auto dtheta_dz = mean_gradient(heat_flux(f.theta, f.w));
  r.diss_z = vertical_dissipation(dtheta_dz);
  r.mean_grad_l2 = std::sqrt(r.diss_z / kSliceArea);
  r.diss_h = epsilon * epsilon * std::pow(lp_norm(grad, 2.0), 2);
  if (theta.max_abs() > 0.0) r.ratios = ratios_from(f, r.l2, r.l3, r.l6);
  return r;
}

EmbeddingRatios embedding_ratios(const SpectralField& theta) {
  return ReportBuilder(theta.grid()).ratios(theta);
}

InvariantReport compute_report(const SpectralField& theta, double t, double epsilon) {
  return ReportBuilder(theta.grid())(theta, t, epsilon);
}

EnvelopeCalibration calibrate_envelopes(const InvariantReport& r0, double slack) {
  EnvelopeCalibration c;
  c.l2_0 = r0.l2;
  c.l3_0 = r0.l3;
  c.l6_0 = r0.l6;
  c.grad_l3_0 = r0.grad_l3;
  c.slack = slack;
  c.c1 = 6.0 * std::pow(kSliceArea, -2.0 / 3.0) * r0.ratios.w_slice_l3 * r0.ratios.w_slice_l3;
  c.c2 = 12.0 * std::pow(kSliceArea, -1.0 / 3.0) * r0.ratios.w_slice_l6 * r0.ratios.w_slice_l6;
  c.c3 = 3.0 * std::max(r0.ratios.dx_uv_inf, r0.ratios.dx_w_inf);
  return c;
}

namespace {

// int_0^t E3(s)^2 ds in closed form.
double l3_envelope_sq_integral(const EnvelopeCalibration& c, double t) {
  const double rate = 2.0 * c.slack * c.c1 * c.l2_0 * c.l2_0 / 3.0;
  const double a = c.l3_0 * c.l3_0;
  if (rate == 0.0) return a * t;
  return a * std::expm1(rate * t) / rate;
}

double l6_envelope(const EnvelopeCalibration& c, double t) {
  return c.l6_0 * std::exp(c.slack * c.c2 * l3_envelope_sq_integral(c, t) / 6.0);
}

}  // namespace

EnvelopeValues envelope_values(const EnvelopeCalibration& c, double t) {
  EnvelopeValues e;
  e.l3 = c.l3_0 * std::exp(c.slack * c.c1 * c.l2_0 * c.l2_0 * t / 3.0);
  e.l6 = l6_envelope(c, t);
  // int_0^t (E6^2 + 1)/3 ds by composite Simpson; E6 is smooth and increasing.
  double integral = 0.0;
  if (t > 0.0 && c.slack != 0.0) {
    const int n = 256;
    const double h = t / n;
    for (int i = 0; i <= n; ++i) {
      const double e6 = l6_envelope(c, i * h);
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      integral += w * (e6 * e6 + 1.0) / 3.0;
    }
    integral *= h / 3.0;
  }
  e.grad_l3 = c.grad_l3_0 * std::exp(c.slack * c.c3 * integral);
  return e;
}

void gronwall_envelopes(std::vector<InvariantReport>& series, double slack) {
  if (series.empty()) throw std::invalid_argument("gronwall_envelopes: empty series");
  if (!(slack >= 0.0)) throw std::invalid_argument("gronwall_envelopes: slack must be >= 0");
  const EnvelopeCalibration cal = calibrate_envelopes(series.front(), slack);
  const double t0 = series.front().t;
  constexpr double kRel = 1e-10;
  for (auto& r : series) {
    r.envelope = envelope_values(cal, r.t - t0);
    r.env3_pass = r.l3 <= r.envelope.l3 * (1.0 + kRel);
    r.env6_pass = r.l6 <= r.envelope.l6 * (1.0 + kRel);
    r.envg3_pass = r.grad_l3 <= r.envelope.grad_l3 * (1.0 + kRel);
  }
}

void fill_budget_residuals(std::vector<InvariantReport>& series) {
  const std::size_t n = series.size();
  if (n < 2) {
    for (auto& r : series) r.budget_residual = 0.0;
    return;
  }
  const std::size_t width = std::min<std::size_t>(5, n);
  std::vector<double> energy(n);
  for (std::size_t i = 0; i < n; ++i) energy[i] = 0.5 * series[i].l2 * series[i].l2;
  for (std::size_t i = 0; i < n; ++i) {
    // stencil window centred on i where possible
    std::size_t lo = i >= width / 2 ? i - width / 2 : 0;
    lo = std::min(lo, n - width);
    const double t = series[i].t;
    // derivative of the Lagrange interpolant through the window, at t
    double deriv = 0.0;
    for (std::size_t a = lo; a < lo + width; ++a) {
      const double ta = series[a].t;
      double weight = 0.0;
      for (std::size_t b = lo; b < lo + width; ++b) {
        if (b == a) continue;
        double term = 1.0 / (ta - series[b].t);
        for (std::size_t c = lo; c < lo + width; ++c) {
          if (c == a || c == b) continue;
          term *= (t - series[c].t) / (ta - series[c].t);
        }
        weight += term;
      }
      deriv += weight * energy[a];
    }
    series[i].budget_residual = std::abs(deriv + series[i].diss_h + series[i].diss_z);
  }
}

void write_series_csv(std::ostream& out, const std::vector<InvariantReport>& series) {
  out << "t,l2,l3,l6,grad_l3,dual,mean_grad_l2,diss_h,diss_z,budget_residual,"
         "ratio_417,ratio_426,ratio_429u,ratio_429w,ratio_56,ratio_58,"
         "env3_pass,env6_pass,envg3_pass\n";
  out << std::setprecision(17);
  for (const auto& r : series) {
    out << r.t << ',' << r.l2 << ',' << r.l3 << ',' << r.l6 << ',' << r.grad_l3 << ','
        << r.dual << ',' << r.mean_grad_l2 << ',' << r.diss_h << ',' << r.diss_z << ','
        << r.budget_residual << ',' << r.ratios.w_slice_l3 << ',' << r.ratios.w_slice_l6 << ','
        << r.ratios.uv_l6 << ',' << r.ratios.w_l6 << ',' << r.ratios.dx_uv_inf << ','
        << r.ratios.dx_w_inf << ',' << int(r.env3_pass) << ',' << int(r.env6_pass) << ','
        << int(r.envg3_pass) << '\n';
  }
}

}  // namespace rotconv
