#include "coexist/hammerstein.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace coexist {

const CertCheck* Certificate::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

double kernel_eval(const KernelSpec& G, double t, double s) {
  switch (G.kind) {
    case KernelKind::Dirichlet: return s <= t ? s * (1 - t) : t * (1 - s);
    case KernelKind::MixedDN: return std::min(s, t);
    case KernelKind::Custom: return G.custom(t, s);
  }
  return 0.0;
}

double kernel_majorant(const KernelSpec& G, double s) {
  if (G.majorant) return G.majorant(s);
  switch (G.kind) {
    case KernelKind::Dirichlet: return s * (1 - s);
    case KernelKind::MixedDN: return s;
    case KernelKind::Custom:
      throw std::invalid_argument("kernel: custom kernels need an explicit majorant");
  }
  return 0.0;
}

namespace {

struct InnerIntegrals {
  double full = 0.0, inJ = 0.0, inJc = 0.0;
};

InnerIntegrals inner_integrals(const KernelSpec& G, double t, int m) {
  auto f = [&](double s) { return kernel_eval(G, t, s); };
  InnerIntegrals r;
  r.inJ = simpson_split(f, G.J.lo, G.J.hi, {t}, m);
  r.inJc = simpson_split(f, 0.0, G.J.lo, {t}, m) + simpson_split(f, G.J.hi, 1.0, {t}, m);
  r.full = r.inJ + r.inJc;
  return r;
}

KernelConstants constants_pass(const KernelSpec& G, int n) {
  // the six extremum scans revisit the same t nodes, so the inner integrals
  // are cached per exact t (keyed by bit pattern)
  std::unordered_map<uint64_t, InnerIntegrals> cache;
  cache.reserve(4 * static_cast<size_t>(n));
  auto at = [&](double t) -> const InnerIntegrals& {
    uint64_t key = 0;
    std::memcpy(&key, &t, sizeof key);
    auto [it, fresh] = cache.try_emplace(key);
    if (fresh) it->second = inner_integrals(G, t, n);
    return it->second;
  };
  auto fullI = [&](double t) { return at(t).full; };
  auto winI = [&](double t) { return at(t).inJ; };
  auto compI = [&](double t) { return at(t).inJc; };

  KernelConstants k;
  k.n = n;
  const double dmax = grid_extremum(fullI, 0.0, 1.0, n, true).value;
  const double Dmin = grid_extremum(winI, G.J.lo, G.J.hi, n, false).value;
  if (!(dmax > 0) || !(Dmin > 0))
    throw std::domain_error("kernel constants: degenerate kernel integral");
  k.d = 1.0 / dmax;
  k.D = 1.0 / Dmin;
  k.S = grid_extremum(winI, 0.0, 1.0, n, true).value;
  k.Sc = grid_extremum(compI, 0.0, 1.0, n, true).value;
  k.s_in = grid_extremum(winI, G.J.lo, G.J.hi, n, true).value;
  k.sc_in = grid_extremum(compI, G.J.lo, G.J.hi, n, true).value;
  return k;
}

}  // namespace

KernelConstants kernel_constants(const KernelSpec& G, int n, double rel_tol) {
  if (n < 65 || n % 2 == 0)
    throw std::invalid_argument("kernel constants: need an odd node count >= 65");
  if (!(G.J.lo >= 0 && G.J.hi <= 1 && G.J.lo < G.J.hi))
    throw std::invalid_argument("kernel constants: degenerate window");
  const KernelConstants coarse = constants_pass(G, n);
  KernelConstants fine = constants_pass(G, 2 * n - 1);
  const double pairs[6][2] = {{coarse.d, fine.d},   {coarse.D, fine.D},
                              {coarse.S, fine.S},   {coarse.Sc, fine.Sc},
                              {coarse.s_in, fine.s_in}, {coarse.sc_in, fine.sc_in}};
  double change = 0.0;
  for (const auto& p : pairs) {
    if (!std::isfinite(p[1]) || !(p[1] > 0))
      throw std::domain_error("kernel constants: nonpositive value");
    change = std::max(change, std::abs(p[0] - p[1]) / std::abs(p[1]));
  }
  if (change > rel_tol) {
    std::ostringstream os;
    os << "kernel constants: refinement change " << change << " exceeds " << rel_tol
       << " between n = " << n << " and " << 2 * n - 1;
    throw std::runtime_error(os.str());
  }
  fine.n = n;
  fine.max_rel_change = change;
  return fine;
}

KernelBoundsReport verify_kernel_bounds(const KernelSpec& G, int n) {
  KernelBoundsReport rep;
  rep.upper_margin = std::numeric_limits<double>::infinity();
  rep.lower_margin = std::numeric_limits<double>::infinity();
  double scale = 1.0;
  const dvec ts = dvec::LinSpaced(n, 0.0, 1.0);
  const dvec tj = dvec::LinSpaced(n, G.J.lo, G.J.hi);
  for (int a = 0; a < n; ++a) {
    const double phi_a = kernel_majorant(G, ts[a]);
    scale = std::max(scale, std::abs(phi_a));
    for (int b = 0; b < n; ++b) {
      const double up = phi_a - kernel_eval(G, ts[b], ts[a]);
      if (up < rep.upper_margin) {
        rep.upper_margin = up;
        rep.upper_witness = {ts[b], ts[a]};
      }
      const double lo = kernel_eval(G, tj[b], ts[a]) - G.c * phi_a;
      if (lo < rep.lower_margin) {
        rep.lower_margin = lo;
        rep.lower_witness = {tj[b], ts[a]};
      }
    }
  }
  rep.window_integral = simpson([&](double s) { return kernel_majorant(G, s); },
                                G.J.lo, G.J.hi, n);
  rep.samples = n * n;
  const double tol = 1e-12 * scale;
  rep.pass = rep.upper_margin >= -tol && rep.lower_margin >= -tol && rep.window_integral > 0;
  return rep;
}

SRange s_window(Interval J) { return {{J}}; }

SRange s_complement(Interval J) {
  SRange r;
  if (J.lo > 0) r.parts.push_back({0.0, J.lo});
  if (J.hi < 1) r.parts.push_back({J.hi, 1.0});
  if (r.parts.empty()) throw std::invalid_argument("s_complement: empty complement");
  return r;
}

SRange s_full() { return {{Interval{0.0, 1.0}}}; }
SRange s_point(double s) { return {{Interval{s, s}}}; }

namespace {

struct ScanBest {
  double value = 0.0;
  std::array<double, 3> arg{};
};

ScanBest scan_box(const Fn3& f, const Box& box, const SRange& srange, bool maximize,
                  int g) {
  const double sgn = maximize ? 1.0 : -1.0;
  ScanBest best;
  best.value = -std::numeric_limits<double>::infinity();
  auto axis = [&](double lo, double hi, int idx) {
    return lo + (hi - lo) * (g == 1 ? 0.0 : double(idx) / (g - 1));
  };
  for (const Interval& part : srange.parts) {
    const int ns = part.length() > 0 ? g : 1;
    for (int a = 0; a < ns; ++a) {
      const double s = axis(part.lo, part.hi, a);
      const int n1 = box.hi[0] > box.lo[0] ? g : 1;
      for (int b = 0; b < n1; ++b) {
        const double x1 = axis(box.lo[0], box.hi[0], b);
        const int n2 = box.hi[1] > box.lo[1] ? g : 1;
        for (int c = 0; c < n2; ++c) {
          const double x2 = axis(box.lo[1], box.hi[1], c);
          const double v = sgn * f(s, x1, x2);
          if (v > best.value) best = {v, {s, x1, x2}};
        }
      }
    }
  }
  // coordinate descent around the best grid point
  const Interval* home = &srange.parts.front();
  for (const Interval& part : srange.parts)
    if (part.contains(best.arg[0])) home = &part;
  const double steps[3] = {home->length() / std::max(1, g - 1),
                           (box.hi[0] - box.lo[0]) / std::max(1, g - 1),
                           (box.hi[1] - box.lo[1]) / std::max(1, g - 1)};
  const double los[3] = {home->lo, box.lo[0], box.lo[1]};
  const double his[3] = {home->hi, box.hi[0], box.hi[1]};
  for (int sweep = 0; sweep < 3; ++sweep)
    for (int ax = 0; ax < 3; ++ax) {
      if (steps[ax] <= 0) continue;
      auto f1 = [&](double v) {
        std::array<double, 3> p = best.arg;
        p[ax] = v;
        return sgn * f(p[0], p[1], p[2]);
      };
      const double lo = std::max(los[ax], best.arg[ax] - steps[ax]);
      const double hi = std::min(his[ax], best.arg[ax] + steps[ax]);
      const Extremum e = golden_extremum(f1, lo, hi, true);
      if (e.value > best.value) {
        best.value = e.value;
        best.arg[ax] = e.arg;
      }
    }
  best.value *= sgn;
  return best;
}

}  // namespace

BoundEstimate box_extremum(const Fn3& f, const Box& box, const SRange& srange,
                           bool maximize, int grid) {
  if (grid < 2) throw std::invalid_argument("box_extremum: need grid >= 2");
  for (int k = 0; k < 2; ++k)
    if (!(box.hi[k] >= box.lo[k])) throw std::invalid_argument("box_extremum: empty box");
  if (srange.parts.empty()) throw std::invalid_argument("box_extremum: empty s-range");
  const ScanBest coarse = scan_box(f, box, srange, maximize, grid);
  const ScanBest fine = scan_box(f, box, srange, maximize, 2 * grid);
  const double sgn = maximize ? 1.0 : -1.0;
  BoundEstimate est;
  est.grid = grid;
  est.refinement = std::abs(coarse.value - fine.value);
  if (sgn * fine.value >= sgn * coarse.value) {
    est.value = fine.value;
    est.arg = fine.arg;
  } else {
    est.value = coarse.value;
    est.arg = coarse.arg;
  }
  return est;
}

const char* theorem_token(TheoremKind k) {
  switch (k) {
    case TheoremKind::MinShell: return "min";
    case TheoremKind::NormShell: return "annulus";
    case TheoremKind::MixedShell: return "mixed";
    case TheoremKind::HalfSumShell: return "halfsum";
  }
  return "?";
}

TheoremKind theorem_from_token(const std::string& token) {
  if (token == "min") return TheoremKind::MinShell;
  if (token == "annulus") return TheoremKind::NormShell;
  if (token == "mixed") return TheoremKind::MixedShell;
  if (token == "halfsum") return TheoremKind::HalfSumShell;
  throw std::invalid_argument("unknown theorem token '" + token +
                              "' (expected min, annulus, mixed or halfsum)");
}

ConditionFlags theorem_flags(TheoremKind kind) {
  ConditionFlags flags;
  if (kind == TheoremKind::MixedShell) flags.component[1] = Mode::Expand;
  return flags;
}

namespace {

std::string tag(const char* base, int j) { return std::string(base) + "[" + std::to_string(j + 1) + "]"; }

void push_scalar_check(Certificate& cert, std::string name, double lhs, double rhs,
                       bool strict, double tol) {
  CertCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.strict = strict;
  c.margin = rhs - lhs;
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  c.pass = strict ? c.margin > tol * scale : c.margin >= -tol * scale;
  cert.checks.push_back(std::move(c));
}

void push_bound_check(Certificate& cert, std::string name, const Fn3& f, const Box& box,
                      const SRange& srange, bool maximize, double rhs, bool strict,
                      const CertifyOptions& opt) {
  const BoundEstimate est = box_extremum(f, box, srange, maximize, opt.box_grid);
  CertCheck c;
  c.name = std::move(name);
  c.lhs = est.value;
  c.rhs = rhs;
  c.strict = strict;
  c.refinement = est.refinement;
  c.margin = maximize ? rhs - est.value : est.value - rhs;
  const double scale = std::max({1.0, std::abs(c.lhs), std::abs(c.rhs)});
  c.pass = strict ? c.margin > opt.tol * scale : c.margin >= -opt.tol * scale;
  if (est.refinement > opt.box_refine_tol * std::max(1.0, std::abs(est.value))) {
    c.pass = false;
    c.note = "bound estimate not converged under grid refinement";
  }
  cert.checks.push_back(std::move(c));
}

}  // namespace

Certificate certify_shell(TheoremKind kind, const std::array<KernelSpec, 2>& G,
                          const std::array<Fn3, 2>& f, std::array<double, 2> r,
                          std::array<double, 2> R, std::array<double, 2> A,
                          std::array<double, 2> B, const CertifyOptions& opt) {
  if (std::abs(G[0].J.lo - G[1].J.lo) > 1e-15 || std::abs(G[0].J.hi - G[1].J.hi) > 1e-15)
    throw std::invalid_argument("certify: both kernels must share the window J");
  const Interval J = G[0].J;
  const std::array<double, 2> c{G[0].c, G[1].c};
  for (int j = 0; j < 2; ++j) {
    if (!(r[j] > 0 && R[j] > 0 && A[j] > 0 && B[j] > 0))
      throw std::domain_error("certify: radii and slopes must be positive");
    std::ostringstream os;
    switch (kind) {
      case TheoremKind::MinShell:
      case TheoremKind::MixedShell:
        if (!(r[j] < c[j] * R[j])) {
          os << "certify: needs r_" << j + 1 << " < c_" << j + 1 << " R_" << j + 1 << " ("
             << r[j] << " vs " << c[j] * R[j] << ")";
          throw std::domain_error(os.str());
        }
        break;
      case TheoremKind::NormShell:
        if (!(r[j] < R[j])) {
          os << "certify: needs r_" << j + 1 << " < R_" << j + 1;
          throw std::domain_error(os.str());
        }
        break;
      case TheoremKind::HalfSumShell:
        if (!(2.0 / (c[j] + 1) * r[j] < R[j])) {
          os << "certify: needs 2/(c+1) r_" << j + 1 << " < R_" << j + 1 << " ("
             << 2.0 / (c[j] + 1) * r[j] << " vs " << R[j] << ")";
          throw std::domain_error(os.str());
        }
        break;
    }
  }

  Certificate cert;
  cert.theorem = theorem_token(kind);
  cert.r = r;
  cert.R = R;
  cert.A = A;
  cert.B = B;

  const std::array<KernelConstants, 2> K{kernel_constants(G[0], opt.n),
                                         kernel_constants(G[1], opt.n)};

  for (int j = 0; j < 2; ++j) {
    const int i = 1 - j;
    const bool expansive = kind == TheoremKind::MixedShell && j == 1;
    if (expansive) {
      push_scalar_check(cert, tag("A<=d", j), A[j], K[j].d, false, opt.tol);
      push_scalar_check(cert, tag("d<=B", j), K[j].d, B[j], false, opt.tol);
      push_scalar_check(cert, tag("As+Bsc<1", j), A[j] * K[j].s_in + B[j] * K[j].sc_in, 1.0,
                        true, opt.tol);
    } else {
      push_scalar_check(cert, tag("B<=d", j), B[j], K[j].d, false, opt.tol);
      push_scalar_check(cert, tag("d<=A", j), K[j].d, A[j], false, opt.tol);
      push_scalar_check(cert, tag("BS+ASc<1", j), B[j] * K[j].S + A[j] * K[j].Sc, 1.0, true,
                        opt.tol);
    }

    Box full;
    full.lo = {0.0, 0.0};
    full.hi = {R[0], R[1]};

    auto component_box = [&](double jlo, double jhi, double ilo, double ihi) {
      Box b;
      b.lo[j] = jlo;
      b.hi[j] = jhi;
      b.lo[i] = ilo;
      b.hi[i] = ihi;
      return b;
    };

    switch (kind) {
      case TheoremKind::MinShell:
        push_bound_check(cert, tag("M<=AR:Jc", j), f[j], full, s_complement(J), true,
                         A[j] * R[j], false, opt);
        push_bound_check(cert, tag("M<=BR:J", j), f[j],
                         component_box(c[j] * R[j], R[j], r[i], R[i]), s_window(J), true,
                         B[j] * R[j], false, opt);
        push_bound_check(cert, tag("m>Dr:J", j), f[j],
                         component_box(r[j], r[j] / c[j], r[i], R[i]), s_window(J), false,
                         K[j].D * r[j], true, opt);
        break;
      case TheoremKind::NormShell:
        push_bound_check(cert, tag("M<=AR:Jc", j), f[j], full, s_complement(J), true,
                         A[j] * R[j], false, opt);
        push_bound_check(cert, tag("M<=BR:J", j), f[j],
                         component_box(c[j] * R[j], R[j], c[i] * r[i], R[i]), s_window(J),
                         true, B[j] * R[j], false, opt);
        push_bound_check(cert, tag("m>Dr:J", j), f[j],
                         component_box(c[j] * r[j], r[j], c[i] * r[i], R[i]), s_window(J),
                         false, K[j].D * r[j], true, opt);
        break;
      case TheoremKind::MixedShell:
        if (j == 0) {
          push_bound_check(cert, tag("M<=AR:Jc", j), f[j], full, s_complement(J), true,
                           A[j] * R[j], false, opt);
          push_bound_check(cert, tag("M<=BR:J", j), f[j],
                           component_box(c[j] * R[j], R[j], c[i] * r[i], R[i]), s_window(J),
                           true, B[j] * R[j], false, opt);
          push_bound_check(cert, tag("m>Dr:J", j), f[j],
                           component_box(r[j], r[j] / c[j], c[i] * r[i], R[i]), s_window(J),
                           false, K[j].D * r[j], true, opt);
        } else {
          Box small;
          small.lo = {0.0, 0.0};
          small.hi = {r[0], r[1]};
          push_bound_check(cert, tag("M<=Ar:J", j), f[j], small, s_window(J), true,
                           A[j] * r[j], false, opt);
          push_bound_check(cert, tag("M<=Br:Jc", j), f[j],
                           component_box(c[j] * r[j], R[j], r[i], R[i]), s_complement(J),
                           true, B[j] * r[j], false, opt);
          push_bound_check(cert, tag("m>DR:J", j), f[j],
                           component_box(c[j] * R[j], R[j], r[i], R[i]), s_window(J), false,
                           K[j].D * R[j], true, opt);
        }
        break;
      case TheoremKind::HalfSumShell: {
        const double qj = 2 * c[j] / (c[j] + 1) * r[j];
        const double pj = 2.0 / (c[j] + 1) * r[j];
        const double qi = 2 * c[i] / (c[i] + 1) * r[i];
        push_bound_check(cert, tag("M<=AR:Jc", j), f[j], full, s_complement(J), true,
                         A[j] * R[j], false, opt);
        push_bound_check(cert, tag("M<=BR:J", j), f[j],
                         component_box(c[j] * R[j], R[j], qi, R[i]), s_window(J), true,
                         B[j] * R[j], false, opt);
        push_bound_check(cert, tag("m>Dr:J", j), f[j], component_box(qj, pj, qi, R[i]),
                         s_window(J), false, K[j].D * r[j], true, opt);
        break;
      }
    }

    push_bound_check(cert, tag("f>=0", j), f[j], full, s_full(), false, 0.0, false, opt);
  }

  cert.verdict = true;
  for (const auto& ch : cert.checks) cert.verdict = cert.verdict && ch.pass;
  return cert;
}

dvec nystrom_row(const KernelSpec& G, const Grid& g, double tau) {
  const int n = g.size();
  const double h = g.h();
  dvec w = dvec::Zero(n);
  const dvec& t = g.nodes();
  for (int p = 0; p + 2 < n; p += 2) {
    w[p] += h / 3 * kernel_eval(G, tau, t[p]);
    w[p + 1] += 4 * h / 3 * kernel_eval(G, tau, t[p + 1]);
    w[p + 2] += h / 3 * kernel_eval(G, tau, t[p + 2]);
  }
  // the diagonal kink sits strictly inside one panel: redo that panel with
  // exact product integration of kernel x quadratic on each side
  const double tol = 1e-12;
  if (tau <= t[0] + tol || tau >= t[n - 1] - tol) return w;
  int p = int((tau - t[0]) / (2 * h)) * 2;
  p = std::min(p, n - 3);
  const double s0 = t[p], s1 = t[p + 1], s2 = t[p + 2];
  if (std::abs(tau - s0) <= tol * h || std::abs(tau - s2) <= tol * h) return w;

  w[p] -= h / 3 * kernel_eval(G, tau, s0);
  w[p + 1] -= 4 * h / 3 * kernel_eval(G, tau, s1);
  w[p + 2] -= h / 3 * kernel_eval(G, tau, s2);

  auto lagrange = [&](int k, double s) {
    switch (k) {
      case 0: return (s - s1) * (s - s2) / ((s0 - s1) * (s0 - s2));
      case 1: return (s - s0) * (s - s2) / ((s1 - s0) * (s1 - s2));
      default: return (s - s0) * (s - s1) / ((s2 - s0) * (s2 - s1));
    }
  };
  const double gauss = 1.0 / std::sqrt(3.0);
  auto add_piece = [&](double u, double v) {
    if (!(v > u)) return;
    const double mid = 0.5 * (u + v), half = 0.5 * (v - u);
    for (double q : {mid - half * gauss, mid + half * gauss}) {
      const double gv = kernel_eval(G, tau, q);
      for (int k = 0; k < 3; ++k) w[p + k] += half * gv * lagrange(k, q);
    }
  };
  add_piece(s0, tau);
  add_piece(tau, s2);
  return w;
}

NystromOperator::NystromOperator(std::array<KernelSpec, 2> G, std::array<Fn3, 2> f,
                                 GridPtr grid)
    : G_(std::move(G)), f_(std::move(f)), grid_(std::move(grid)) {
  const int n = grid_->size();
  if (n % 2 == 0 || n < 65)
    throw std::invalid_argument("nystrom: need an odd grid with at least 65 nodes");
  for (int j = 0; j < 2; ++j) {
    W_[j].resize(n, n);
    for (int k = 0; k < n; ++k) W_[j].row(k) = nystrom_row(G_[j], *grid_, grid_->node(k)).transpose();
  }
}

dvec NystromOperator::fvals(int j, const dvec& x1, const dvec& x2) const {
  const int n = grid_->size();
  dvec v(n);
  for (int k = 0; k < n; ++k) v[k] = f_[j](grid_->node(k), x1[k], x2[k]);
  return v;
}

dvec NystromOperator::apply_component(int j, const dvec& x1, const dvec& x2) const {
  return W_[j] * fvals(j, x1, x2);
}

std::array<dvec, 2> NystromOperator::apply(const std::array<dvec, 2>& x) const {
  return {apply_component(0, x[0], x[1]), apply_component(1, x[0], x[1])};
}

double NystromOperator::interpolate(int j, double t, const dvec& x1, const dvec& x2) const {
  return nystrom_row(G_[j], *grid_, t).dot(fvals(j, x1, x2));
}

double NystromOperator::cone_defect(int j, const dvec& y) const {
  return grid_cone(grid_, G_[j].c, G_[j].J).violation(y);
}

SolverResult solve_system(const NystromOperator& T, std::array<dvec, 2> init,
                          const SolverOptions& opt) {
  const int n = T.grid().size();
  SolverResult res;
  for (int j = 0; j < 2; ++j)
    if (init[j].size() != n) throw std::invalid_argument("solve: init has the wrong size");

  auto flatten = [n](const std::array<dvec, 2>& x) {
    dvec v(2 * n);
    v << x[0], x[1];
    return v;
  };
  auto unflatten = [n](const dvec& v) {
    return std::array<dvec, 2>{v.head(n), v.tail(n)};
  };

  const int m = std::max(1, opt.window);
  std::vector<dvec> Fs, Gs;
  dvec x = flatten(init);

  for (int it = 1; it <= opt.max_iter; ++it) {
    const std::array<dvec, 2> xs = unflatten(x);
    const std::array<dvec, 2> Txs = T.apply(xs);
    const dvec g = flatten(Txs);
    const dvec F = g - x;
    const double xnorm = x.cwiseAbs().maxCoeff();
    res.residual = F.cwiseAbs().maxCoeff();
    res.iterations = it;
    if (res.residual <= opt.tol * (1 + xnorm)) {
      res.converged = true;
      break;
    }

    dvec next = g;  // plain Picard step
    if (opt.anderson) {
      Fs.push_back(F);
      Gs.push_back(g);
      if (int(Fs.size()) > m + 1) {
        Fs.erase(Fs.begin());
        Gs.erase(Gs.begin());
      }
      const int k = int(Fs.size()) - 1;
      if (k >= 1) {
        Eigen::MatrixXd dF(2 * n, k), dG(2 * n, k);
        for (int c = 0; c < k; ++c) {
          dF.col(c) = Fs[c + 1] - Fs[c];
          dG.col(c) = Gs[c + 1] - Gs[c];
        }
        const dvec gamma = dF.colPivHouseholderQr().solve(F);
        const dvec cand = g - dG * gamma;
        bool ok = cand.allFinite();
        if (ok) {
          const std::array<dvec, 2> cs = unflatten(cand);
          for (int j = 0; j < 2 && ok; ++j) {
            const ConeSpec K = grid_cone(T.grid_ptr(), T.kernels()[j].c, T.kernels()[j].J);
            ok = K.contains(cs[j], 1e-10);
          }
        }
        if (ok) next = cand;
      }
    }
    x = next;
  }
  res.x = unflatten(x);
  for (int j = 0; j < 2; ++j) {
    const double self = res.x[j].cwiseAbs().maxCoeff();
    const double other = res.x[1 - j].cwiseAbs().maxCoeff();
    res.trivial[j] = self < 1e-8 * std::max(1.0, other);
  }
  return res;
}

std::vector<Localization> theorem_localization(TheoremKind kind, const NystromOperator& T,
                                               const std::array<dvec, 2>& x,
                                               std::array<double, 2> r,
                                               std::array<double, 2> R, double tol) {
  std::vector<Localization> out;
  auto push = [&](std::string name, double value, double bound, bool lower) {
    Localization l;
    l.name = std::move(name);
    l.value = value;
    l.bound = bound;
    l.lower = lower;
    l.margin = lower ? value - bound : bound - value;
    l.pass = l.margin > tol * std::max(1.0, std::abs(bound));
    out.push_back(std::move(l));
  };
  for (int j = 0; j < 2; ++j) {
    const Interval J = T.kernels()[j].J;
    double minJ = std::numeric_limits<double>::infinity(), maxJ = 0.0;
    for (int idx : T.grid().mask(J)) {
      minJ = std::min(minJ, x[j][idx]);
      maxJ = std::max(maxJ, x[j][idx]);
    }
    const double sup = x[j].cwiseAbs().maxCoeff();
    switch (kind) {
      case TheoremKind::MinShell:
        push(tag("minJ>r", j), minJ, r[j], true);
        break;
      case TheoremKind::NormShell:
        push(tag("sup>r", j), sup, r[j], true);
        break;
      case TheoremKind::MixedShell:
        if (j == 0) push(tag("minJ>r", j), minJ, r[j], true);
        else push(tag("maxJ>r", j), maxJ, r[j], true);
        break;
      case TheoremKind::HalfSumShell:
        push(tag("halfsum>r", j), 0.5 * (minJ + sup), r[j], true);
        break;
    }
    push(tag("sup<R", j), sup, R[j], false);
  }
  return out;
}

}  // namespace coexist
