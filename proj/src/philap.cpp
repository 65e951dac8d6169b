#include "coexist/philap.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace coexist {

PhiSpec p_laplacian(double p) {
  if (!(p > 1)) throw std::invalid_argument("p_laplacian: need p > 1");
  PhiSpec s;
  s.kind = PhiKind::PLaplacian;
  s.p = p;
  s.a = std::numeric_limits<double>::infinity();
  return s;
}

PhiSpec minkowski(double a) {
  if (!(a > 0)) throw std::invalid_argument("minkowski: need a > 0");
  PhiSpec s;
  s.kind = PhiKind::Minkowski;
  s.a = a;
  return s;
}

PhiSpec custom_phi(Fn1 fwd, Fn1 inv, double a) {
  PhiSpec s;
  s.kind = PhiKind::Custom;
  s.fwd = std::move(fwd);
  s.inv = std::move(inv);
  s.a = a;
  return s;
}

double phi_eval(const PhiSpec& phi, double x) {
  switch (phi.kind) {
    case PhiKind::PLaplacian:
      return std::copysign(std::pow(std::abs(x), phi.p - 1), x);
    case PhiKind::Minkowski: {
      if (!(std::abs(x) < phi.a)) {
        std::ostringstream os;
        os << "phi_eval: |x| = " << std::abs(x) << " outside the singular domain (-" << phi.a
           << ", " << phi.a << ")";
        throw std::domain_error(os.str());
      }
      const double u = x / phi.a;
      return x / std::sqrt(1 - u * u);
    }
    case PhiKind::Custom:
      return phi.fwd(x);
  }
  return 0.0;
}

double phi_inverse(const PhiSpec& phi, double y) {
  switch (phi.kind) {
    case PhiKind::PLaplacian:
      return std::copysign(std::pow(std::abs(y), 1.0 / (phi.p - 1)), y);
    case PhiKind::Minkowski: {
      const double u = y / phi.a;
      return y / std::sqrt(1 + u * u);
    }
    case PhiKind::Custom:
      return phi.inv(y);
  }
  return 0.0;
}

std::array<dvec, 2> apply_philap(const PhiProblem& P, const std::array<dvec, 2>& x) {
  const Grid& g = *P.grid;
  const int n = g.size();
  const double h = g.h();
  std::array<dvec, 2> out;
  for (int j = 0; j < 2; ++j) {
    dvec w(n);
    for (int k = 0; k < n; ++k) w[k] = P.f[j](x[0][k], x[1][k]);
    dvec I(n);
    I[0] = 0.0;
    for (int k = 1; k < n; ++k) I[k] = I[k - 1] + h / 2 * (w[k - 1] + w[k]);
    dvec u(n);
    for (int k = 0; k < n; ++k) u[k] = phi_inverse(P.phi[j], I[k]);
    dvec& T = out[j];
    T.resize(n);
    T[n - 1] = 0.0;
    for (int k = n - 2; k >= 0; --k) T[k] = T[k + 1] + h / 2 * (u[k] + u[k + 1]);
  }
  return out;
}

double cone_defect_K(const dvec& x) {
  const int n = int(x.size());
  double d = -x.minCoeff();
  for (int k = 0; k + 1 < n; ++k) d = std::max(d, x[k + 1] - x[k]);
  for (int k = 1; k + 1 < n; ++k) d = std::max(d, x[k + 1] - 2 * x[k] + x[k - 1]);
  return d;
}

double gamma_functional(const Grid& g, const dvec& x) { return g.integrate_trapezoid(x); }

Certificate certify_philap(const PhiProblem& P, std::array<double, 2> r,
                           std::array<double, 2> R, const CertifyOptions& opt) {
  for (int j = 0; j < 2; ++j) {
    if (!(r[j] > 0 && R[j] > 0))
      throw std::domain_error("certify: radii must be positive");
    if (!(2 * r[j] < R[j])) {
      std::ostringstream os;
      os << "certify: needs 2 r_" << j + 1 << " < R_" << j + 1 << " (" << 2 * r[j] << " vs "
         << R[j] << ")";
      throw std::domain_error(os.str());
    }
    if (P.phi[j].singular() && R[j] > P.phi[j].a * (1 + 1e-12)) {
      std::ostringstream os;
      os << "certify: R_" << j + 1 << " exceeds the singular height " << P.phi[j].a;
      throw std::domain_error(os.str());
    }
  }

  Certificate cert;
  cert.theorem = "philap";
  cert.r = r;
  cert.R = R;

  Box full;
  full.lo = {0.0, 0.0};
  full.hi = {R[0], R[1]};

  for (int j = 0; j < 2; ++j) {
    const int i = 1 - j;
    auto f3 = [&, j](double, double x1, double x2) { return P.f[j](x1, x2); };

    Box shell;
    shell.lo[j] = r[j] / 2;
    shell.hi[j] = 2 * r[j];
    shell.lo[i] = r[i] / 2;
    shell.hi[i] = R[i];

    const BoundEstimate m = box_extremum(f3, shell, s_point(0.0), false, opt.box_grid);
    {
      CertCheck c;
      c.name = std::string("phiinv(m/2)>8r/3[") + std::to_string(j + 1) + "]";
      c.lhs = phi_inverse(P.phi[j], m.value / 2);
      c.rhs = 8.0 / 3.0 * r[j];
      c.strict = true;
      c.refinement = m.refinement;
      c.margin = c.lhs - c.rhs;
      const double scale = std::max({1.0, std::abs(c.lhs), std::abs(c.rhs)});
      c.pass = c.margin > opt.tol * scale;
      if (m.refinement > opt.box_refine_tol * std::max(1.0, std::abs(m.value))) {
        c.pass = false;
        c.note = "bound estimate not converged under grid refinement";
      }
      cert.checks.push_back(std::move(c));
    }

    const BoundEstimate M = box_extremum(f3, full, s_point(0.0), true, opt.box_grid);
    {
      CertCheck c;
      c.name = std::string("phiinv(M)<R[") + std::to_string(j + 1) + "]";
      c.lhs = phi_inverse(P.phi[j], M.value);
      c.rhs = R[j];
      c.strict = true;
      c.refinement = M.refinement;
      c.margin = c.rhs - c.lhs;
      const double scale = std::max({1.0, std::abs(c.lhs), std::abs(c.rhs)});
      c.pass = c.margin > opt.tol * scale;
      if (P.phi[j].singular() && R[j] >= P.phi[j].a * (1 - 1e-12)) {
        c.pass = true;
        c.note = "automatic: singular Phi with R at its height";
      } else if (M.refinement > opt.box_refine_tol * std::max(1.0, std::abs(M.value))) {
        c.pass = false;
        c.note = "bound estimate not converged under grid refinement";
      }
      cert.checks.push_back(std::move(c));
    }

    const BoundEstimate nn = box_extremum(f3, full, s_point(0.0), false, opt.box_grid);
    {
      CertCheck c;
      c.name = std::string("f>=0[") + std::to_string(j + 1) + "]";
      c.lhs = nn.value;
      c.rhs = 0.0;
      c.margin = nn.value;
      c.refinement = nn.refinement;
      c.pass = c.margin >= -opt.tol;
      cert.checks.push_back(std::move(c));
    }
  }

  cert.verdict = true;
  for (const auto& ch : cert.checks) cert.verdict = cert.verdict && ch.pass;
  return cert;
}

AsymptoticsReport check_asymptotics(const PhiProblem& P) {
  AsymptoticsReport rep;
  const double taus[3] = {2.0, 16.0 / 3.0, 10.0};
  rep.ratios_bounded = true;
  rep.diverges = true;
  for (int j = 0; j < 2; ++j) {
    for (double tau : taus) {
      AsymptoticsRow row;
      row.tau = tau;
      double r30 = 0.0, r40 = 0.0;
      for (int k = 1; k <= 40; ++k) {
        const double x = std::ldexp(1.0, -k);
        if (P.phi[j].singular() && tau * x >= P.phi[j].a) continue;
        const double ratio = phi_eval(P.phi[j], tau * x) / phi_eval(P.phi[j], x);
        if (!std::isfinite(ratio)) continue;
        ++row.used;
        row.max_ratio = std::max(row.max_ratio, ratio);
        if (k == 30) r30 = ratio;
        if (k == 40) r40 = ratio;
      }
      row.tail_ratio = r40;
      if (r30 > 0 && r40 > 0)
        row.slope = (std::log(r40) - std::log(r30)) / (-10.0 * std::log(2.0));
      row.bounded = row.used > 0 && std::isfinite(row.max_ratio) &&
                    std::abs(row.slope) <= 0.05;
      rep.ratios_bounded = rep.ratios_bounded && row.bounded;
      rep.ratio_rows[j].push_back(row);
    }
    DivergenceRow div;
    {
      const double x30 = std::ldexp(1.0, -30), x40 = std::ldexp(1.0, -40);
      div.g_mid = P.f[j](x30, x30) / phi_eval(P.phi[j], x30);
      div.g_tail = P.f[j](x40, x40) / phi_eval(P.phi[j], x40);
      div.growth = div.g_tail / div.g_mid;
      div.divergent = std::isfinite(div.g_tail) && div.growth >= 4.0 && div.g_tail > 100.0;
    }
    rep.diverges = rep.diverges && div.divergent;
    rep.divergence[j] = div;
  }
  return rep;
}

SmallRadiusSearch search_small_r(const PhiProblem& P, std::array<double, 2> R,
                                 const CertifyOptions& opt) {
  if (!P.f_monotone)
    throw std::invalid_argument(
        "search_small_r: needs nonlinearities declared monotone in each argument");
  for (int j = 0; j < 2; ++j)
    if (!P.phi[j].singular())
      throw std::invalid_argument("search_small_r: needs singular Phi in both components");
  const AsymptoticsReport ev = check_asymptotics(P);
  if (!ev.ratios_bounded || !ev.diverges)
    throw std::domain_error("search_small_r: asymptotic evidence fails");

  SmallRadiusSearch out;
  for (double r = P.phi[0].a / 4; r >= std::ldexp(1.0, -40); r /= 2) {
    out.tried.push_back(r);
    const Certificate cert = certify_philap(P, {r, r}, R, opt);
    if (cert.verdict) {
      out.found = true;
      out.r = r;
      out.certificate = cert;
      return out;
    }
  }
  return out;
}

SolverResult solve_philap(const PhiProblem& P, std::array<dvec, 2> init,
                          const SolverOptions& opt) {
  const int n = P.grid->size();
  SolverResult res;
  for (int j = 0; j < 2; ++j)
    if (init[j].size() != n) throw std::invalid_argument("solve: init has the wrong size");
  std::array<dvec, 2> x = std::move(init);
  for (int it = 1; it <= opt.max_iter; ++it) {
    const std::array<dvec, 2> y = apply_philap(P, x);
    double resid = 0.0, xnorm = 0.0;
    for (int j = 0; j < 2; ++j) {
      resid = std::max(resid, (y[j] - x[j]).cwiseAbs().maxCoeff());
      xnorm = std::max(xnorm, x[j].cwiseAbs().maxCoeff());
    }
    res.iterations = it;
    res.residual = resid;
    if (!std::isfinite(resid)) throw std::runtime_error("solve: iteration diverged");
    x = y;
    if (resid <= opt.tol * (1 + xnorm)) {
      res.converged = true;
      break;
    }
  }
  res.x = x;
  for (int j = 0; j < 2; ++j) {
    const double self = res.x[j].cwiseAbs().maxCoeff();
    const double other = res.x[1 - j].cwiseAbs().maxCoeff();
    res.trivial[j] = self < 1e-8 * std::max(1.0, other);
  }
  return res;
}

std::vector<Localization> philap_localization(const PhiProblem& P,
                                              const std::array<dvec, 2>& x,
                                              std::array<double, 2> r,
                                              std::array<double, 2> R, double tol) {
  std::vector<Localization> out;
  for (int j = 0; j < 2; ++j) {
    Localization lo;
    lo.name = std::string("gamma>r[") + std::to_string(j + 1) + "]";
    lo.value = gamma_functional(*P.grid, x[j]);
    lo.bound = r[j];
    lo.lower = true;
    lo.margin = lo.value - lo.bound;
    lo.pass = lo.margin > tol * std::max(1.0, std::abs(lo.bound));
    out.push_back(lo);

    Localization hi;
    hi.name = std::string("sup<R[") + std::to_string(j + 1) + "]";
    hi.value = x[j].cwiseAbs().maxCoeff();
    hi.bound = R[j];
    hi.lower = false;
    hi.margin = hi.bound - hi.value;
    hi.pass = hi.margin > tol * std::max(1.0, std::abs(hi.bound));
    out.push_back(hi);
  }
  return out;
}

}  // namespace coexist
