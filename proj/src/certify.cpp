#include "lamcert/certify.hpp"

#include <algorithm>
#include <cmath>

#include "lamcert/norms.hpp"

namespace lamcert {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::certified_cores: return "certified-cores";
    case Verdict::not_certified: return "not-certified";
    case Verdict::hypotheses_failed: return "hypotheses-failed";
  }
  return "?";
}

namespace {

constexpr double kLengthFloor = 7.823;

std::string slope_id(const CompleteSlope& slope) {
  std::string s;
  for (std::size_t i = 0; i < slope.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(slope[i].p()) + ',' + std::to_string(slope[i].q());
  }
  return s;
}

}  // namespace

CertificationReport evaluate_filling(const FillingInputs& in) {
  const auto& k = in.constants;
  CertificationReport rep;
  rep.id = in.id;
  rep.ell = in.ell;
  rep.tubes = in.tubes;

  rep.assumptions = {
      {"C", k.C, "ingested: admissible constant for the thick norm bound"},
      {"L", k.L, "ingested: slope length threshold"},
      {"mu", k.mu, "ingested: Margulis constant of the decomposition"},
      {"D", k.D, "ingested: depth parameter"},
      {"t", k.t, "ingested: core clearance parameter"},
  };
  if (k.mu3) rep.assumptions.push_back({"mu3", *k.mu3, "ingested: 3-dimensional Margulis constant"});
  for (std::size_t i = 0; i < in.tubes.size(); ++i) {
    const std::string p = "tube[" + std::to_string(i) + "].";
    rep.assumptions.push_back({p + "core_length", in.tubes[i].core_length, in.tube_provenance});
    rep.assumptions.push_back({p + "twist", in.tubes[i].twist, in.tube_provenance});
    rep.assumptions.push_back({p + "radius", in.tubes[i].radius, in.tube_provenance});
  }

  bool failed = false;
  const bool above_floor = std::isfinite(in.ell) && in.ell > kLengthFloor;
  if (above_floor) {
    rep.nz_window = nz_core_length_window(in.ell);
  } else {
    failed = true;
    rep.reasons.push_back("total normalized length <= 7.823");
  }
  if (!(in.ell > k.L)) {
    failed = true;
    rep.reasons.push_back("total normalized length <= L");
  }
  rep.length_hypotheses = above_floor && in.ell > k.L;

  if (in.tubes.empty()) {
    rep.reasons.push_back("no tube shapes available");
  } else {
    if (rep.nz_window) {
      double total = 0.0;
      for (const auto& t : in.tubes) total += t.core_length;
      rep.cores_in_window = total > rep.nz_window->lo * (1.0 - 1e-12) && total <= rep.nz_window->hi * (1.0 + 1e-12);
      if (!*rep.cores_in_window) {
        failed = true;
        rep.reasons.push_back("total tube core length lies outside the length window");
      }
    }
    const auto cert = make_deepness_certificate(k.D, k.t, k.mu, k.mu3, in.tubes);
    rep.deep_2d = check_deepness(cert, true);
    rep.deep_d = check_deepness(cert, false);
    if (rep.deep_2d->overall == Tristate::fail) {
      failed = true;
      rep.reasons.push_back("tubes are not (2D, t)-deep");
    } else if (rep.deep_2d->overall == Tristate::indeterminate) {
      rep.reasons.push_back("(2D, t)-deepness undecided at the diameter tolerance");
    }
  }

  if (above_floor && in.kind == SurgeryKind::zero) {
    rep.stable_lower = stable_lower_bound_from_cores(in.n_cusps, in.ell);
    rep.stable_lower_method = "core multicurve with the length window";
  } else if (in.empirical_lower) {
    rep.stable_lower = *in.empirical_lower;
    rep.stable_lower_method = "empirical witnesses";
  } else {
    rep.reasons.push_back("no stable lower bound available");
  }

  rep.thick_upper_conditional = thick_stable_upper_bound(k.C, in.thurston_norm);
  if (rep.stable_lower) {
    rep.criterion_margin = *rep.stable_lower - 3.0 * rep.thick_upper_conditional;
    rep.partial_margin = *rep.stable_lower - rep.thick_upper_conditional;
    if (!(*rep.criterion_margin > 0.0)) rep.reasons.push_back("stable lower bound <= 3 x thick upper bound");
  }

  if (failed) {
    rep.verdict = Verdict::hypotheses_failed;
  } else if (rep.criterion_margin && *rep.criterion_margin > 0.0 && rep.deep_2d &&
             rep.deep_2d->overall == Tristate::pass) {
    rep.verdict = Verdict::certified_cores;
  } else {
    rep.verdict = Verdict::not_certified;
  }
  return rep;
}

std::vector<TubeShape> filling_tubes(const ManifoldBundle& bundle, const CompleteSlope& slope,
                                     double ell, std::string* provenance) {
  if (bundle.tube_mode == TubeMode::given) {
    if (provenance) *provenance = "ingested: tube shapes from the manifold file";
    return bundle.tubes;
  }
  if (provenance) {
    *provenance =
        "estimate: total core length at the upper end of the length window, split by normalized "
        "length; radius from Meyerhoff's bound; twist from the cusp torus";
  }
  if (!(ell > kLengthFloor)) return {};
  const Interval window = nz_core_length_window(ell);
  const auto lats = bundle.lattices();
  std::vector<double> w(lats.size());
  double wsum = 0.0;
  for (std::size_t i = 0; i < lats.size(); ++i) {
    const double li = normalized_length(lats[i], slope[i]);
    w[i] = 1.0 / (li * li);
    wsum += w[i];
  }
  std::vector<TubeShape> out;
  for (std::size_t i = 0; i < lats.size(); ++i) {
    const double eps = window.hi * w[i] / wsum;
    const double twist = tube_from_boundary(lats[i], slope[i]).twist;
    try {
      out.emplace_back(eps, twist, meyerhoff_radius(eps));
    } catch (const HypothesisError&) {
      return {};
    }
  }
  return out;
}

CertificationReport certify_filling(const ManifoldBundle& bundle, const SurgeryClassDatum& datum,
                                    const CompleteSlope& slope, const AssumptionBundle& constants,
                                    std::optional<double> empirical_lower, const std::string& id) {
  if (std::all_of(datum.cls.begin(), datum.cls.end(), [](std::int64_t v) { return v == 0; })) {
    throw HypothesisError("the zero class is not a surgery class");
  }
  if (slope.size() != bundle.cusps.size()) {
    throw InputError("slope: expected one slope per cusp (" + std::to_string(bundle.cusps.size()) + ")");
  }
  if (!is_compatible(datum.cls, bundle.inclusion, slope)) {
    throw HypothesisError("class does not vanish on the filling slope " + slope_id(slope));
  }
  const auto lats = bundle.lattices();
  FillingInputs in;
  in.id = id.empty() ? slope_id(slope) : id;
  in.ell = total_normalized_length(lats, slope);
  in.n_cusps = static_cast<std::int64_t>(bundle.cusps.size());
  in.kind = datum.kind;
  in.thurston_norm = datum.thurston_norm;
  in.tubes = filling_tubes(bundle, slope, in.ell, &in.tube_provenance);
  in.empirical_lower = empirical_lower;
  in.constants = constants;
  return evaluate_filling(in);
}

ThresholdResult subquadratic_threshold(std::vector<ThresholdRow> rows, double C) {
  if (rows.empty()) throw InputError("empty family");
  if (!(C > 0.0) || !std::isfinite(C)) throw InputError("constant C must be positive");
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
  ThresholdResult res;
  std::optional<std::int64_t> last_fail;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i && r.index == rows[i - 1].index) throw InputError("duplicate index " + std::to_string(r.index));
    if (r.n_cusps < 1) throw InputError("cusp count must be positive");
    ThresholdEntry e;
    e.index = r.index;
    e.rhs = 3.0 * thick_stable_upper_bound(C, r.thurston_norm);
    if (std::isfinite(r.ell) && r.ell > kLengthFloor) e.lhs = stable_lower_bound_from_cores(r.n_cusps, r.ell);
    e.holds = e.lhs && *e.lhs > e.rhs;
    if (!e.holds) last_fail = r.index;
    res.table.push_back(e);
  }
  if (!last_fail) {
    res.N = rows.front().index;
  } else if (*last_fail == rows.back().index) {
    res.trailing_violation = *last_fail;
  } else {
    res.N = *last_fail;
  }
  return res;
}

DichotomyStatement dichotomy_statement(const CertificationReport& report) {
  if (report.verdict == Verdict::certified_cores) {
    return {Conclusion::full,
            "every leaf of the stretch lamination is a filling core curve (conditional on the "
            "assumption bundle)"};
  }
  if (report.length_hypotheses && report.partial_margin && *report.partial_margin > 0.0 &&
      report.deep_d && report.deep_d->overall == Tristate::pass) {
    return {Conclusion::partial,
            "the stretch lamination contains a filling core curve (conditional on the assumption "
            "bundle)"};
  }
  return {Conclusion::none, "no conclusion"};
}

}  // namespace lamcert
