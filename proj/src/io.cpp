#include "lamcert/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace lamcert {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& field(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw InputError((path.empty() ? "document" : path) + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(join(path, key) + ": missing");
  return *it;
}

const Json* optional_field(const Json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double real(const Json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    char* end = nullptr;
    errno = 0;
    const double d = std::strtod(s.c_str(), &end);
    if (!s.empty() && end == s.c_str() + s.size() && errno == 0) return d;
  }
  throw InputError(path + ": expected a real number");
}

std::int64_t integer(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    char* end = nullptr;
    errno = 0;
    const long long x = std::strtoll(s.c_str(), &end, 10);
    if (!s.empty() && end == s.c_str() + s.size() && errno == 0) return x;
  }
  throw InputError(path + ": expected an integer");
}

const Json& array(const Json& v, const std::string& path, std::optional<std::size_t> size = {}) {
  if (!v.is_array()) throw InputError(path + ": expected an array");
  if (size && v.size() != *size) {
    throw InputError(path + ": expected " + std::to_string(*size) + " entries, got " + std::to_string(v.size()));
  }
  return v;
}

std::vector<std::int64_t> int_vector(const Json& v, const std::string& path) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < array(v, path).size(); ++i) out.push_back(integer(v[i], index(path, i)));
  return out;
}

std::array<std::int64_t, 2> int_pair(const Json& v, const std::string& path) {
  array(v, path, 2);
  return {integer(v[0], index(path, 0)), integer(v[1], index(path, 1))};
}

void check_schema(const Json& doc) {
  const auto& s = field(doc, "schema", "");
  if (!s.is_string() || s.get<std::string>() != kSchema) {
    throw InputError(std::string("schema: expected \"") + kSchema + "\"");
  }
}

std::string string_or(const Json& doc, const std::string& key, const std::string& fallback) {
  const Json* v = optional_field(doc, key);
  if (!v) return fallback;
  if (!v->is_string()) throw InputError(key + ": expected a string");
  return v->get<std::string>();
}

CuspShape parse_cusp(const Json& c, const std::string& path) {
  const auto& sh = array(field(c, "shape", path), join(path, "shape"), 2);
  CuspShape out{real(sh[0], join(path, "shape[0]")), real(sh[1], join(path, "shape[1]")),
                real(field(c, "area", path), join(path, "area"))};
  if (!(out.tau_im > 0.0)) throw InputError(join(path, "shape[1]") + ": imaginary part must be positive");
  if (!(out.area > 0.0)) throw InputError(join(path, "area") + ": must be positive");
  return out;
}

Json cusp_json(const CuspShape& c) {
  return {{"shape", {format_real(c.tau_re), format_real(c.tau_im)}}, {"area", format_real(c.area)}};
}

TubeShape parse_tube(const Json& t, const std::string& path) {
  try {
    if (optional_field(t, "boundary")) {
      const CuspShape b = parse_cusp(field(t, "boundary", path), join(path, "boundary"));
      const auto m = int_pair(field(t, "meridian", path), join(path, "meridian"));
      return tube_from_boundary(FlatTorusLattice::from_shape(b.tau_re, b.tau_im, b.area), Slope(m[0], m[1]));
    }
    return TubeShape(real(field(t, "core_length", path), join(path, "core_length")),
                     real(field(t, "twist", path), join(path, "twist")),
                     real(field(t, "radius", path), join(path, "radius")));
  } catch (const HypothesisError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const InputError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw InputError(path + ": " + msg);
  }
}

ThurstonData parse_thurston(const Json& t, const std::string& path) {
  ThurstonData out;
  if (const Json* cone = optional_field(t, "cone")) {
    const std::string cp = join(path, "cone");
    ThurstonCone c;
    const auto& gens = array(field(*cone, "generators", cp), join(cp, "generators"));
    for (std::size_t i = 0; i < gens.size(); ++i) c.generators.push_back(int_vector(gens[i], index(join(cp, "generators"), i)));
    c.norms = int_vector(field(*cone, "norms", cp), join(cp, "norms"));
    out.cone = std::move(c);
  }
  if (const Json* table = optional_field(t, "table")) {
    const std::string tp = join(path, "table");
    for (std::size_t i = 0; i < array(*table, tp).size(); ++i) {
      const std::string ep = index(tp, i);
      out.table[int_vector(field((*table)[i], "class", ep), join(ep, "class"))] =
          integer(field((*table)[i], "norm", ep), join(ep, "norm"));
    }
  }
  return out;
}

Json thurston_json(const ThurstonData& t) {
  Json out = Json::object();
  if (t.cone) out["cone"] = {{"generators", t.cone->generators}, {"norms", t.cone->norms}};
  if (!t.table.empty()) {
    Json table = Json::array();
    for (const auto& [cls, v] : t.table) table.push_back({{"class", cls}, {"norm", v}});
    out["table"] = std::move(table);
  }
  return out;
}

Json opt_real(const std::optional<double>& v) { return v ? Json(format_real(*v)) : Json(nullptr); }

Json interval_json(const Interval& i) { return Json::array({format_real(i.lo), format_real(i.hi)}); }

Json tube_json(const TubeShape& t) {
  return {{"core_length", format_real(t.core_length)},
          {"twist", format_real(t.twist)},
          {"radius", format_real(t.radius)}};
}

Json slope_json(const CompleteSlope& s) {
  Json out = Json::array();
  for (const auto& x : s) out.push_back({x.p(), x.q()});
  return out;
}

Json datum_json(const SurgeryClassDatum& d) {
  Json bd = Json::array();
  for (const auto& b : d.boundary) bd.push_back({b.x, b.y});
  return {{"class", d.cls},
          {"thurston_norm", d.thurston_norm},
          {"kind", d.kind == SurgeryKind::zero ? "zero-surgery" : "general"},
          {"boundary", std::move(bd)}};
}

const char* conclusion_name(Conclusion c) {
  switch (c) {
    case Conclusion::full: return "full";
    case Conclusion::partial: return "partial";
    case Conclusion::none: return "none";
  }
  return "?";
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw InputError(path.string() + ": cannot write");
  out << doc.dump(2) << '\n';
}

CompleteSlope parse_slope_list(const std::string& text, const std::string& fieldname) {
  CompleteSlope out;
  std::stringstream ss(text);
  std::string item;
  std::size_t i = 0;
  while (std::getline(ss, item, ';')) {
    const std::string path = index(fieldname, i++);
    const auto comma = item.find(',');
    if (comma == std::string::npos) throw InputError(path + ": expected \"p,q\"");
    const Json p = item.substr(0, comma), q = item.substr(comma + 1);
    try {
      out.emplace_back(integer(p, path), integer(q, path));
    } catch (const InputError& e) {
      const std::string msg = e.what();
      throw InputError(msg.rfind(path, 0) == 0 ? msg : path + ": " + msg);
    }
  }
  if (out.empty()) throw InputError(fieldname + ": empty slope list");
  return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& text, const std::string& fieldname) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(integer(Json(item), index(fieldname, out.size())));
  if (out.empty()) throw InputError(fieldname + ": empty list");
  return out;
}

std::string format_slope_list(const CompleteSlope& slope) {
  std::string s;
  for (std::size_t i = 0; i < slope.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(slope[i].p()) + ',' + std::to_string(slope[i].q());
  }
  return s;
}

AssumptionBundle parse_constants(const Json& doc, const std::string& path) {
  AssumptionBundle c;
  c.C = real(field(doc, "C", path), join(path, "C"));
  c.L = real(field(doc, "L", path), join(path, "L"));
  c.mu = real(field(doc, "mu", path), join(path, "mu"));
  c.D = real(field(doc, "D", path), join(path, "D"));
  c.t = real(field(doc, "t", path), join(path, "t"));
  if (const Json* m = optional_field(doc, "mu3")) c.mu3 = real(*m, join(path, "mu3"));
  return c;
}

Json to_json(const AssumptionBundle& c) {
  Json out = {{"C", format_real(c.C)},   {"L", format_real(c.L)}, {"mu", format_real(c.mu)},
              {"D", format_real(c.D)},   {"t", format_real(c.t)}};
  if (c.mu3) out["mu3"] = format_real(*c.mu3);
  return out;
}

ManifoldBundle parse_manifold(const Json& doc) {
  check_schema(doc);
  ManifoldBundle b;
  b.name = string_or(doc, "name", "");
  const auto& cusps = array(field(doc, "cusps", ""), "cusps");
  for (std::size_t i = 0; i < cusps.size(); ++i) b.cusps.push_back(parse_cusp(cusps[i], index("cusps", i)));
  const auto& inc = array(field(doc, "inclusion", ""), "inclusion");
  for (std::size_t j = 0; j < inc.size(); ++j) {
    const std::string path = index("inclusion", j);
    const auto& rows = array(inc[j], path);
    IntMatrix m(rows.size(), 2);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto row = int_pair(rows[r], index(path, r));
      m(r, 0) = row[0];
      m(r, 1) = row[1];
    }
    b.inclusion.per_cusp.push_back(std::move(m));
  }
  const auto& tubes = field(doc, "tubes", "");
  if (tubes.is_string()) {
    if (tubes.get<std::string>() != "derive-from-nz") throw InputError("tubes: expected an array or \"derive-from-nz\"");
    b.tube_mode = TubeMode::derive_from_nz;
  } else {
    b.tube_mode = TubeMode::given;
    for (std::size_t i = 0; i < array(tubes, "tubes").size(); ++i) b.tubes.push_back(parse_tube(tubes[i], index("tubes", i)));
  }
  b.thurston = parse_thurston(field(doc, "thurston", ""), "thurston");
  b.constants = parse_constants(field(doc, "constants", ""));
  b.validate();
  return b;
}

Json to_json(const ManifoldBundle& b) {
  Json cusps = Json::array();
  for (const auto& c : b.cusps) cusps.push_back(cusp_json(c));
  Json inc = Json::array();
  for (const auto& m : b.inclusion.per_cusp) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back({m(r, 0), m(r, 1)});
    inc.push_back(std::move(rows));
  }
  Json tubes;
  if (b.tube_mode == TubeMode::derive_from_nz) {
    tubes = "derive-from-nz";
  } else {
    tubes = Json::array();
    for (const auto& t : b.tubes) tubes.push_back(tube_json(t));
  }
  return {{"schema", kSchema},        {"name", b.name},
          {"cusps", std::move(cusps)}, {"inclusion", std::move(inc)},
          {"tubes", std::move(tubes)}, {"thurston", thurston_json(b.thurston)},
          {"constants", to_json(b.constants)}};
}

FamilySpec parse_family(const Json& doc) {
  check_schema(doc);
  FamilySpec s;
  s.name = string_or(doc, "name", "family");
  s.alpha = int_vector(field(doc, "alpha", ""), "alpha");
  s.beta = int_vector(field(doc, "beta", ""), "beta");
  const auto& a = array(field(doc, "a", ""), "a");
  for (std::size_t i = 0; i < a.size(); ++i) s.a.push_back(int_pair(a[i], index("a", i)));
  const auto& b = array(field(doc, "b", ""), "b");
  for (std::size_t i = 0; i < b.size(); ++i) s.b.push_back(int_pair(b[i], index("b", i)));
  const auto range = int_pair(field(doc, "n_range", ""), "n_range");
  s.n_lo = range[0];
  s.n_hi = range[1];
  if (s.n_lo > s.n_hi) throw InputError("n_range: lower end exceeds upper end");
  if (const Json* cone = optional_field(doc, "cone")) {
    s.thurston.cone = ThurstonCone{{s.alpha, s.beta},
                                   {integer(field(*cone, "alpha_norm", "cone"), "cone.alpha_norm"),
                                    integer(field(*cone, "beta_norm", "cone"), "cone.beta_norm")}};
  }
  if (const Json* table = optional_field(doc, "thurston_table")) {
    s.thurston.table = parse_thurston(Json{{"table", *table}}, "thurston").table;
  }
  if (!s.thurston.cone && s.thurston.table.empty()) throw InputError("cone: missing (or give thurston_table)");
  if (const Json* inv = optional_field(doc, "involution")) {
    if (!inv->is_boolean()) throw InputError("involution: expected a boolean");
    s.involution = inv->get<bool>();
  }
  return s;
}

Json to_json(const FamilySpec& s) {
  Json a = Json::array(), b = Json::array();
  for (const auto& x : s.a) a.push_back(x);
  for (const auto& x : s.b) b.push_back(x);
  Json out = {{"schema", kSchema}, {"name", s.name}, {"alpha", s.alpha}, {"beta", s.beta},
              {"a", std::move(a)}, {"b", std::move(b)}, {"n_range", {s.n_lo, s.n_hi}},
              {"involution", s.involution}};
  if (s.thurston.cone) out["cone"] = {{"alpha_norm", s.thurston.cone->norms[0]}, {"beta_norm", s.thurston.cone->norms[1]}};
  if (!s.thurston.table.empty()) out["thurston_table"] = thurston_json(s.thurston)["table"];
  return out;
}

Json to_json(const DeepnessVerdict& v) {
  Json conds = Json::array();
  for (const auto& c : v.conditions) {
    conds.push_back({{"name", c.name},
                     {"tube", c.tube ? Json(*c.tube) : Json(nullptr)},
                     {"status", to_string(c.status)},
                     {"margin", format_real(c.margin)}});
  }
  return {{"doubled", v.doubled},
          {"depth_used", format_real(v.depth_used)},
          {"overall", to_string(v.overall)},
          {"conditions", std::move(conds)}};
}

Json to_json(const CertificationReport& r) {
  Json assumptions = Json::array();
  for (const auto& a : r.assumptions) {
    assumptions.push_back({{"name", a.name}, {"value", format_real(a.value)}, {"provenance", a.provenance}});
  }
  Json tubes = Json::array();
  for (const auto& t : r.tubes) tubes.push_back(tube_json(t));
  const auto concl = dichotomy_statement(r);
  return {{"id", r.id},
          {"ell", format_real(r.ell)},
          {"nz_window", r.nz_window ? interval_json(*r.nz_window) : Json(nullptr)},
          {"stable_lower", opt_real(r.stable_lower)},
          {"stable_lower_method", r.stable_lower_method},
          {"thick_upper_conditional", format_real(r.thick_upper_conditional)},
          {"criterion_margin", opt_real(r.criterion_margin)},
          {"partial_margin", opt_real(r.partial_margin)},
          {"length_hypotheses", r.length_hypotheses},
          {"cores_in_window", r.cores_in_window ? Json(*r.cores_in_window) : Json(nullptr)},
          {"deepness",
           {{"2D", r.deep_2d ? to_json(*r.deep_2d) : Json(nullptr)},
            {"D", r.deep_d ? to_json(*r.deep_d) : Json(nullptr)}}},
          {"verdict", to_string(r.verdict)},
          {"reasons", r.reasons},
          {"conclusion", {{"kind", conclusion_name(concl.kind)}, {"text", concl.text}}},
          {"assumptions", std::move(assumptions)},
          {"tubes", std::move(tubes)}};
}

Json to_json(const ThresholdResult& t) {
  Json table = Json::array();
  for (const auto& e : t.table) {
    table.push_back({{"index", e.index}, {"lhs", opt_real(e.lhs)}, {"rhs", format_real(e.rhs)}, {"holds", e.holds}});
  }
  return {{"N", t.N ? Json(*t.N) : Json(nullptr)},
          {"trailing_violation", t.trailing_violation ? Json(*t.trailing_violation) : Json(nullptr)},
          {"table", std::move(table)}};
}

Json to_json(const FamilyTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"n", r.n},
                    {"slope", slope_json(r.slope)},
                    {"datum", datum_json(r.datum)},
                    {"per_core_window", r.per_core_window ? interval_json(*r.per_core_window) : Json(nullptr)},
                    {"report", to_json(r.report)}});
  }
  Json skipped = Json::array();
  for (const auto& s : t.skipped) skipped.push_back({{"n", s.n}, {"cusp", s.cusp}, {"gcd", s.gcd}});
  return {{"name", t.name}, {"rows", std::move(rows)}, {"skipped", std::move(skipped)}, {"threshold", to_json(t.threshold)}};
}

Json certify_document(const ManifoldBundle& bundle, const CohomologyClass& cls, const CompleteSlope& slope,
                      const AssumptionBundle& constants) {
  if (cls.size() != bundle.inclusion.betti()) throw InputError("class: rank does not match the inclusion map");
  const auto datum = make_surgery_datum(cls, bundle.inclusion, bundle.thurston.norm_of(cls));
  const auto rep = certify_filling(bundle, datum, slope, constants);
  return {{"schema", kSchema},
          {"kind", "certify-report"},
          {"input",
           {{"manifold", to_json(bundle)},
            {"class", cls},
            {"slope", format_slope_list(slope)},
            {"constants", to_json(constants)}}},
          {"datum", datum_json(datum)},
          {"report", to_json(rep)}};
}

Json family_document(const FamilySpec& spec, const ManifoldBundle& bundle, const AssumptionBundle& constants,
                     unsigned jobs) {
  const auto table = family_table(spec, bundle, constants, jobs);
  return {{"schema", kSchema},
          {"kind", "family-report"},
          {"input", {{"manifold", to_json(bundle)}, {"spec", to_json(spec)}, {"constants", to_json(constants)}}},
          {"table", to_json(table)}};
}

Json recompute_document(const Json& report, unsigned jobs) {
  check_schema(report);
  const auto& kind = field(report, "kind", "");
  const auto& input = field(report, "input", "");
  const auto bundle = parse_manifold(field(input, "manifold", "input"));
  const auto constants = parse_constants(field(input, "constants", "input"), "input.constants");
  if (kind == "certify-report") {
    const auto& sl = field(input, "slope", "input");
    if (!sl.is_string()) throw InputError("input.slope: expected a string");
    return certify_document(bundle, int_vector(field(input, "class", "input"), "input.class"),
                            parse_slope_list(sl.get<std::string>(), "input.slope"), constants);
  }
  if (kind == "family-report") {
    return family_document(parse_family(field(input, "spec", "input")), bundle, constants, jobs);
  }
  throw InputError("kind: expected \"certify-report\" or \"family-report\"");
}

}  // namespace lamcert
