#include "aifv/geometry.hpp"

#include <algorithm>

#include "aifv/error.hpp"

namespace aifv {

CostLine line_of(const CodeTree& tree, const SourceDist& dist) {
  const TreeMetrics m = tree.metrics(dist);
  if (tree.kind() == TreeKind::T0) return {m.average_length, m.q1, tree};
  return {m.average_length, -m.q0, tree};
}

EnvelopePoint envelope_at(const Rational& x, const SourceDist& dist) {
  BestTreeResult b0 = best_tree(x, dist, TreeKind::T0);
  BestTreeResult b1 = best_tree(x, dist, TreeKind::T1);
  CostLine f{b0.metrics.average_length, b0.metrics.q1, std::move(b0.tree)};
  CostLine g{b1.metrics.average_length, -b1.metrics.q0, std::move(b1.tree)};
  return {std::move(b0.value), std::move(b1.value), std::move(f), std::move(g)};
}

std::optional<PlanePoint> intersect_lines(const CostLine& a, const CostLine& b) {
  if (a.slope == b.slope) return std::nullopt;
  Rational x = (b.intercept - a.intercept) / (a.slope - b.slope);
  Rational y = a.at(x);
  return PlanePoint{std::move(x), std::move(y)};
}

namespace {

Rational min_at(const std::vector<CostLine>& lines, const Rational& x) {
  Rational best = lines.front().at(x);
  for (std::size_t i = 1; i < lines.size(); ++i) best = min(best, lines[i].at(x));
  return best;
}

}  // namespace

PlanePoint crossing_in_interval(const Rational& l, const Rational& r,
                                const std::vector<CostLine>& lines0,
                                const std::vector<CostLine>& lines1) {
  if (lines0.empty() || lines0.size() > 2 || lines1.empty() || lines1.size() > 2)
    throw Error("crossing_in_interval expects one or two lines per envelope");
  if (r < l) throw Error("crossing_in_interval: empty interval");

  const Rational dl = min_at(lines0, l) - min_at(lines1, l);
  const Rational dr = min_at(lines0, r) - min_at(lines1, r);
  if (dl.sign() > 0 || dr.sign() < 0)
    throw Error("crossing_in_interval: envelopes do not change sign on the interval");

  std::vector<Rational> xs;
  if (dl.is_zero()) xs.push_back(l);
  if (dr.is_zero()) xs.push_back(r);
  for (const CostLine& f : lines0) {
    for (const CostLine& g : lines1) {
      if (auto p = intersect_lines(f, g); p && !(p->x1 < l) && !(r < p->x1))
        xs.push_back(std::move(p->x1));
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  for (const Rational& x : xs) {
    Rational e0 = min_at(lines0, x);
    if (e0 == min_at(lines1, x)) return {x, std::move(e0)};
  }
  throw Error("crossing_in_interval: no crossing among candidate points");
}

SeparationResult separation_oracle(const PlanePoint& q, const SourceDist& dist) {
  if (q.x1.sign() < 0) return {false, Rational(-1), Rational(0), Rational(0), {}};
  if (Rational(1) < q.x1) return {false, Rational(1), Rational(0), Rational(1), {}};
  if (q.x2.sign() < 0) return {false, Rational(0), Rational(-1), Rational(0), {}};

  EnvelopePoint env = envelope_at(q.x1, dist);
  if (!(env.e0 < q.x2) && !(env.e1 < q.x2))
    return {true, Rational(0), Rational(0), Rational(0), {}};

  // Cut with the line defining min(E0,E1) at x1 (the most violated one);
  // E0's line on a tie. For a violated f-line, z2 - q1*z1 <= L on K; for a
  // violated g-line, z2 + q0*z1 <= L.
  const bool use_f = !(env.e1 < env.e0);
  const CostLine& line = use_f ? env.f : env.g;
  return {false, -line.slope, Rational(1), line.intercept, line};
}

}  // namespace aifv
