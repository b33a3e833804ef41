#include "lamcert/family.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <variant>

namespace lamcert {

NonPrimitiveSlope::NonPrimitiveSlope(std::size_t c, std::int64_t g)
    : InputError("slope on cusp " + std::to_string(c) + " is divisible by " + std::to_string(g)),
      cusp(c),
      gcd(g) {}

void FamilySpec::validate(const BoundaryInclusionMap& inc) const {
  if (n_lo > n_hi) throw InputError("n_range: lower end exceeds upper end");
  if (alpha.size() != inc.betti() || beta.size() != inc.betti()) {
    throw InputError("alpha/beta: rank does not match the inclusion map");
  }
  if (a.size() != inc.cusps() || b.size() != inc.cusps()) {
    throw InputError("a/b: expected one curve per cusp (" + std::to_string(inc.cusps()) + ")");
  }
  for (std::size_t j = 0; j < inc.cusps(); ++j) {
    const auto ev = [&](const CohomologyClass& c, const std::array<std::int64_t, 2>& x) {
      return evaluate(c, inc, j, x[0], x[1]);
    };
    if (ev(alpha, a[j]) != 1 || ev(beta, b[j]) != 1 || ev(alpha, b[j]) != 0 || ev(beta, a[j]) != 0) {
      throw InputError("duality alpha(a)=beta(b)=1, alpha(b)=beta(a)=0 fails on cusp " +
                       std::to_string(j));
    }
  }
}

GeneratedFilling generate(const FamilySpec& spec, const BoundaryInclusionMap& inc, std::int64_t n) {
  if (n < spec.n_lo || n > spec.n_hi) throw InputError("n outside the family range");
  GeneratedFilling g;
  g.n = n;
  CohomologyClass cls(spec.alpha.size());
  for (std::size_t i = 0; i < cls.size(); ++i) cls[i] = checked_add(checked_mul(n, spec.alpha[i]), spec.beta[i]);
  for (std::size_t j = 0; j < spec.a.size(); ++j) {
    const std::int64_t p = checked_add(spec.a[j][0], -checked_mul(n, spec.b[j][0]));
    const std::int64_t q = checked_add(spec.a[j][1], -checked_mul(n, spec.b[j][1]));
    const std::int64_t d = gcd64(p, q);
    if (d == 0) throw InputError("a - n b vanishes on cusp " + std::to_string(j));
    if (d != 1) throw NonPrimitiveSlope(j, d);
    g.slope.emplace_back(p, q);
  }
  if (!is_compatible(cls, inc, g.slope)) throw HypothesisError("generated class does not kill its slope");
  g.datum = make_surgery_datum(cls, inc, spec.thurston.norm_of(cls));
  return g;
}

namespace {

using RowOutcome = std::variant<std::monostate, FamilyRow, SkippedIndex, std::exception_ptr>;

RowOutcome compute_row(const FamilySpec& spec, const ManifoldBundle& bundle,
                       const AssumptionBundle& constants, std::int64_t n) {
  try {
    auto g = generate(spec, bundle.inclusion, n);
    FamilyRow row;
    row.n = n;
    row.report = certify_filling(bundle, g.datum, g.slope, constants, std::nullopt,
                                 spec.name + "[" + std::to_string(n) + "]");
    row.slope = std::move(g.slope);
    row.datum = std::move(g.datum);
    if (spec.involution && row.report.nz_window) {
      const double k = static_cast<double>(bundle.cusps.size());
      row.per_core_window = Interval{row.report.nz_window->lo / k, row.report.nz_window->hi / k};
    }
    return row;
  } catch (const NonPrimitiveSlope& e) {
    return SkippedIndex{n, e.cusp, e.gcd};
  } catch (...) {
    return std::current_exception();
  }
}

}  // namespace

FamilyTable family_table(const FamilySpec& spec, const ManifoldBundle& bundle,
                         const AssumptionBundle& constants, unsigned jobs) {
  spec.validate(bundle.inclusion);
  const std::size_t count = static_cast<std::size_t>(spec.n_hi - spec.n_lo) + 1;
  std::vector<RowOutcome> out(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      out[i] = compute_row(spec, bundle, constants, spec.n_lo + static_cast<std::int64_t>(i));
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }

  FamilyTable table;
  table.name = spec.name;
  std::vector<ThresholdRow> trows;
  for (auto& o : out) {
    if (auto* e = std::get_if<std::exception_ptr>(&o)) std::rethrow_exception(*e);
    if (auto* s = std::get_if<SkippedIndex>(&o)) {
      table.skipped.push_back(*s);
    } else if (auto* r = std::get_if<FamilyRow>(&o)) {
      trows.push_back({r->n, r->report.ell, r->datum.thurston_norm,
                       static_cast<std::int64_t>(bundle.cusps.size())});
      table.rows.push_back(std::move(*r));
    }
  }
  table.threshold = subquadratic_threshold(std::move(trows), constants.C);
  return table;
}

}  // namespace lamcert
