#include "aifv/solvers.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "aifv/codec.hpp"
#include "aifv/error.hpp"

namespace aifv {

const char* to_string(Method m) {
  switch (m) {
    case Method::BinarySearch: return "binary-search";
    case Method::Ellipsoid: return "ellipsoid";
    case Method::Iterative: return "iterative";
    case Method::Exhaustive: return "exhaustive";
  }
  return "?";
}

std::optional<Method> method_from_string(const std::string& name) {
  if (name == "binary-search") return Method::BinarySearch;
  if (name == "ellipsoid") return Method::Ellipsoid;
  if (name == "iterative") return Method::Iterative;
  if (name == "exhaustive") return Method::Exhaustive;
  return std::nullopt;
}

Rational epsilon0(long b) { return Rational::pow2(-2 * (b + 1)); }
Rational epsilon1(long b) { return Rational::pow2(-3 * (b + 1)); }

namespace {

SolveReport finish_report(Method method, const Rational& x, const SourceDist& dist,
                          long iterations, long oracle_calls) {
  BestTreeResult t0 = best_tree(x, dist, TreeKind::T0);
  BestTreeResult t1 = best_tree(x, dist, TreeKind::T1);
  const bool degenerate = t0.metrics.q1.is_zero();
  CodePair pair(std::move(t0.tree), std::move(t1.tree));
  Rational cost = aifv_cost(pair, dist);
  return {std::move(pair), x,    std::move(cost), method,
          iterations,      oracle_calls, degenerate};
}

}  // namespace

SolveReport solve_binary_search(const SourceDist& dist) {
  const Rational eps0 = epsilon0(dist.b());
  Rational l(0), r(1);
  long iterations = 0;
  while (!(r - l == eps0)) {
    const Rational mid = (l + r) / 2;
    const EnvelopePoint env = envelope_at(mid, dist);
    if (env.e0 < env.e1)
      l = mid;
    else
      r = mid;
    ++iterations;
  }
  const EnvelopePoint at_l = envelope_at(l, dist);
  const EnvelopePoint at_r = envelope_at(r, dist);
  const PlanePoint x_star =
      crossing_in_interval(l, r, {at_l.f, at_r.f}, {at_l.g, at_r.g});
  return finish_report(Method::BinarySearch, x_star.x1, dist, iterations, 0);
}

namespace {

// 2 - log2(3) rounded to a multiple of 2^-k, clamped into [0,1].
Rational rounded_classic_start(long b) {
  const long k = std::min(2 * (b + 2), 60L);
  const double scaled = std::ldexp(2.0 - std::log2(3.0), static_cast<int>(k));
  Rational start = Rational(std::llround(scaled)) * Rational::pow2(-k);
  return min(max(start, Rational(0)), Rational(1));
}

}  // namespace

SolveReport solve_iterative(const SourceDist& dist, std::optional<Rational> start,
                            long iteration_cap) {
  Rational c_prev = start.value_or(rounded_classic_start(dist.b()));
  if (c_prev.sign() < 0 || Rational(1) < c_prev)
    throw Error("iterative start must lie in [0,1]");

  long iterations = 0;
  for (;;) {
    ++iterations;
    if (iterations > iteration_cap)
      throw Error("iterative solver exceeded " + std::to_string(iteration_cap) +
                  " iterations; the fixed point is cycling");
    BestTreeResult t0 = best_tree(c_prev, dist, TreeKind::T0);
    BestTreeResult t1 = best_tree(c_prev, dist, TreeKind::T1);
    const Rational denom = t0.metrics.q1 + t1.metrics.q0;  // > 0: reduced T1 has a leaf
    const Rational c = (t1.metrics.average_length - t0.metrics.average_length) / denom;
    if (c == c_prev) {
      const bool degenerate = t0.metrics.q1.is_zero();
      CodePair pair(std::move(t0.tree), std::move(t1.tree));
      Rational cost = aifv_cost(pair, dist);
      return {std::move(pair), c, std::move(cost), Method::Iterative,
              iterations,      0, degenerate};
    }
    const Rational clamped = min(max(c, Rational(0)), Rational(1));
    if (clamped == c_prev)
      throw Error("iterative solver is stuck at the [0,1] boundary");
    c_prev = clamped;
  }
}

long ellipsoid_call_budget(int n, long b) {
  const double bound =
      6.0 * (1.0 + 4.0 * std::log2(8.0 * n) + 2.0 * (3.0 * b + 3.0));
  return static_cast<long>(std::floor(bound));
}

long default_ellipsoid_precision(int n, long b) {
  return 6 * (b + 1) + static_cast<long>(std::ceil(std::log2(n))) + 64;
}

namespace {

struct PrecisionLoss {};

Rational to_rational(const mpf_class& f) {
  mpq_class q;
  mpq_set_f(q.get_mpq_t(), f.get_mpf_t());
  return Rational(std::move(q));
}

struct Phase1Result {
  PlanePoint feasible;
  long calls;
};

// Central-cut ellipsoid over K starting from B(0,4n), maximizing x2. Keeps
// the running ellipsoid in floating point at `prec` bits; every oracle query
// and every feasibility decision happens on the exact rationalization of the
// center. Stops once the best feasible point provably sits within eps1/2 of
// the ellipsoid's own upper bound, or once the theorem budget is spent
// (at which point the volume argument already certifies eps1 accuracy).
Phase1Result ellipsoid_phase1(const SourceDist& dist, long prec, long budget) {
  const int n = static_cast<int>(dist.n());
  const Rational eps1_half = epsilon1(dist.b()) / 2;

  mpf_class c1(0, prec), c2(0, prec);
  mpf_class a11(0, prec), a12(0, prec), a22(0, prec);
  a11 = 16L * n * n;  // R^2 with R = 4n
  a22 = 16L * n * n;

  std::optional<PlanePoint> best;
  long calls = 0;

  mpf_class d1(0, prec), d2(0, prec);
  mpf_class t(0, prec), u(0, prec), s(0, prec), sq(0, prec);
  mpf_class ad1(0, prec), ad2(0, prec), g1(0, prec), g2(0, prec);

  while (calls < budget) {
    if (best) {
      if (a22 < 0) throw PrecisionLoss{};
      mpf_sqrt(sq.get_mpf_t(), a22.get_mpf_t());
      t = c2 + sq;
      const Rational upper = to_rational(t);
      if (!(best->x2 < upper - eps1_half)) break;
    }

    const PlanePoint center{to_rational(c1), to_rational(c2)};
    const SeparationResult cut = separation_oracle(center, dist);
    ++calls;
    if (cut.inside) {
      if (!best || best->x2 < center.x2) best = center;
      d1 = 0;
      d2 = -1;  // keep x2 >= current center: cut direction -c
    } else {
      mpf_set_q(d1.get_mpf_t(), cut.a1.raw().get_mpq_t());
      mpf_set_q(d2.get_mpf_t(), cut.a2.raw().get_mpq_t());
    }

    // g = A d / sqrt(d^T A d); center -= g/3; A = 4/3 (A - 2/3 g g^T).
    t = a11 * d1;
    u = a12 * d2;
    ad1 = t + u;
    t = a12 * d1;
    u = a22 * d2;
    ad2 = t + u;
    t = d1 * ad1;
    u = d2 * ad2;
    s = t + u;
    if (s <= 0) throw PrecisionLoss{};
    mpf_sqrt(sq.get_mpf_t(), s.get_mpf_t());
    g1 = ad1 / sq;
    g2 = ad2 / sq;

    t = g1 / 3;
    c1 -= t;
    t = g2 / 3;
    c2 -= t;

    auto shrink = [&](mpf_class& a, const mpf_class& p, const mpf_class& q) {
      t = p * q;
      t *= 2;
      t /= 3;
      a -= t;
      a *= 4;
      a /= 3;
    };
    shrink(a11, g1, g1);
    shrink(a12, g1, g2);
    shrink(a22, g2, g2);

    if (a11 <= 0) throw PrecisionLoss{};
    t = a11 * a22;
    u = a12 * a12;
    if (t <= u) throw PrecisionLoss{};
  }

  if (!best)
    throw Error("ellipsoid exhausted its oracle budget (" + std::to_string(budget) +
                " calls) without finding a feasible point");
  return {std::move(*best), calls};
}

}  // namespace

SolveReport solve_ellipsoid(const SourceDist& dist, const EllipsoidOptions& opts) {
  const int n = static_cast<int>(dist.n());
  const long b = dist.b();
  const long budget = ellipsoid_call_budget(n, b);
  long prec = opts.precision_bits.value_or(default_ellipsoid_precision(n, b));
  if (prec < 8) throw Error("ellipsoid precision must be at least 8 bits");

  Phase1Result p1{{Rational(0), Rational(0)}, 0};
  bool done = false;
  for (int attempt = 0; attempt < 8 && !done; ++attempt, prec *= 2) {
    try {
      p1 = ellipsoid_phase1(dist, prec, budget);
      done = true;
    } catch (const PrecisionLoss&) {
      // shape matrix went indefinite; retry from scratch with more bits
    }
  }
  if (!done)
    throw Error("ellipsoid shape matrix kept losing positive definiteness");

  // Phase 2, exact: the optimum's parameter lies within eps0/2 of the
  // feasible point's x1, and each envelope restricted to [l,r] is the min of
  // its two endpoint witness lines.
  const Rational half_eps0 = epsilon0(b) / 2;
  const Rational l = max(Rational(0), p1.feasible.x1 - half_eps0);
  const Rational r = min(p1.feasible.x1 + half_eps0, Rational(1));
  const EnvelopePoint at_l = envelope_at(l, dist);
  const EnvelopePoint at_r = envelope_at(r, dist);
  const CostLine* lines[4] = {&at_l.f, &at_r.f, &at_l.g, &at_r.g};

  auto m_of = [&](const Rational& x) {
    Rational v = lines[0]->at(x);
    for (int i = 1; i < 4; ++i) v = min(v, lines[i]->at(x));
    return v;
  };

  std::vector<Rational> candidates{l, r};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (auto p = intersect_lines(*lines[i], *lines[j]);
          p && !(p->x1 < l) && !(r < p->x1))
        candidates.push_back(std::move(p->x1));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // Largest maximizer: on a flat top this lands on its right end, which is
  // never 0, keeping the reported parameter inside (0,1].
  Rational best_x = candidates.front();
  Rational best_v = m_of(best_x);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    Rational v = m_of(candidates[i]);
    if (!(v < best_v)) {
      best_v = std::move(v);
      best_x = candidates[i];
    }
  }

  SolveReport report = finish_report(Method::Ellipsoid, best_x, dist, p1.calls, p1.calls);
  return report;
}

SolveReport solve_exhaustive(const SourceDist& dist) {
  ExhaustiveResult res = exhaustive_optimum(dist);
  const bool degenerate = res.pair.t0.metrics(dist).q1.is_zero();
  return {std::move(res.pair), std::nullopt, std::move(res.cost),
          Method::Exhaustive,  0,            0,
          degenerate};
}

SolveReport solve(const SourceDist& dist, Method method) {
  switch (method) {
    case Method::BinarySearch: return solve_binary_search(dist);
    case Method::Ellipsoid: return solve_ellipsoid(dist);
    case Method::Iterative: return solve_iterative(dist);
    case Method::Exhaustive: return solve_exhaustive(dist);
  }
  throw Error("unknown method");
}

namespace {

std::string decimal(const Rational& r) {
  std::ostringstream os;
  os.precision(12);
  os << r.to_double();
  return os.str();
}

std::string decimal(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::string render_report(const SolveReport& report, const SourceDist& dist) {
  const HuffmanResult huff = huffman(dist);
  const double h = entropy(dist);
  std::ostringstream os;
  os << "aifv2 solve report\n";
  os << "method: " << to_string(report.method) << "\n";
  os << "n: " << dist.n() << "\n";
  os << "b: " << dist.b() << "\n";
  if (report.x_star)
    os << "x_star: " << report.x_star->str() << " (" << decimal(*report.x_star) << ")\n";
  else
    os << "x_star: -\n";
  os << "cost: " << report.cost.str() << " (" << decimal(report.cost) << ")\n";
  os << "huffman_cost: " << huff.cost.str() << " (" << decimal(huff.cost) << ")\n";
  os << "entropy_bits: " << decimal(h) << "\n";
  os << "redundancy_bits: " << decimal(report.cost.to_double() - h) << "\n";
  os << "iterations: " << report.iterations << "\n";
  os << "oracle_calls: " << report.oracle_calls << "\n";
  os << "degenerate: " << (report.degenerate ? "true" : "false") << "\n";
  os << "--- t0.tree ---\n" << report.pair.t0.serialize();
  os << "--- t1.tree ---\n" << report.pair.t1.serialize();
  return os.str();
}

}  // namespace aifv
