// lamcert command-line front end.

#include <chrono>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "lamcert/io.hpp"
#include "lamcert/norms.hpp"
#include "lamcert/propcheck.hpp"

using namespace lamcert;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitHypothesis = 3;
constexpr int kExitViolation = 4;

struct Common {
  std::string manifold;
  std::string constants;
  std::optional<double> C;
  std::string out;
  bool json = false;
  unsigned jobs = 1;
};

AssumptionBundle resolve_constants(const Common& o, const ManifoldBundle* bundle) {
  AssumptionBundle c;
  if (!o.constants.empty()) {
    const Json doc = read_json_file(o.constants);
    c = parse_constants(doc.contains("constants") ? doc.at("constants") : doc);
  } else if (bundle) {
    c = bundle->constants;
  } else {
    throw InputError("constants: no manifold or constants file given");
  }
  if (o.C) c.C = *o.C;
  return c;
}

void emit(const Common& o, const Json& doc) {
  if (!o.out.empty()) write_json_file(o.out, doc);
  if (o.json) std::cout << doc.dump(2) << '\n';
}

std::string opt_str(const Json& v) { return v.is_null() ? "-" : v.get<std::string>(); }

int cmd_slope(const Common& o, const std::string& slope_text) {
  const auto bundle = parse_manifold(read_json_file(o.manifold));
  const auto slope = parse_slope_list(slope_text);
  if (slope.size() != bundle.cusps.size()) {
    throw InputError("slope: expected " + std::to_string(bundle.cusps.size()) + " pairs");
  }
  const auto lats = bundle.lattices();
  Json rows = Json::array();
  for (std::size_t i = 0; i < slope.size(); ++i) {
    rows.push_back({{"cusp", i},
                    {"slope", {slope[i].p(), slope[i].q()}},
                    {"length", format_real(slope_length(lats[i], slope[i]))},
                    {"normalized_length", format_real(normalized_length(lats[i], slope[i]))}});
  }
  const double total = total_normalized_length(lats, slope);
  const Json doc = {{"schema", kSchema}, {"kind", "slope"}, {"cusps", rows}, {"total_normalized_length", format_real(total)}};
  if (o.json) {
    std::cout << doc.dump(2) << '\n';
  } else {
    std::printf("%-5s %-14s %-22s %-22s\n", "cusp", "slope", "length", "normalized");
    for (const auto& r : rows) {
      const std::string s = std::to_string(r["slope"][0].get<long long>()) + "," + std::to_string(r["slope"][1].get<long long>());
      std::printf("%-5zu %-14s %-22s %-22s\n", r["cusp"].get<std::size_t>(), s.c_str(),
                  r["length"].get<std::string>().c_str(), r["normalized_length"].get<std::string>().c_str());
    }
    std::printf("total normalized length: %s\n", format_real(total).c_str());
  }
  if (!o.out.empty()) write_json_file(o.out, doc);
  return 0;
}

int cmd_nz(const Common& o, double ell, std::optional<std::int64_t> cusps) {
  const Interval w = nz_core_length_window(ell);
  Json doc = {{"schema", kSchema}, {"kind", "nz"}, {"ell", format_real(ell)}, {"window", {format_real(w.lo), format_real(w.hi)}}};
  if (cusps) doc["stable_lower"] = format_real(stable_lower_bound_from_cores(*cusps, ell));
  if (o.json) {
    std::cout << doc.dump(2) << '\n';
  } else {
    std::printf("core length window for ell = %s: (%.15g, %.15g)\n", format_real(ell).c_str(), w.lo, w.hi);
    if (cusps) std::printf("stable norm lower bound (n = %lld): %.15g\n", static_cast<long long>(*cusps),
                           stable_lower_bound_from_cores(*cusps, ell));
  }
  if (!o.out.empty()) write_json_file(o.out, doc);
  return 0;
}

void print_report(const Json& r) {
  std::printf("filling %s\n", r["id"].get<std::string>().c_str());
  std::printf("  ell                      %s\n", r["ell"].get<std::string>().c_str());
  if (!r["nz_window"].is_null()) {
    std::printf("  core length window       (%s, %s)\n", r["nz_window"][0].get<std::string>().c_str(),
                r["nz_window"][1].get<std::string>().c_str());
  }
  std::printf("  stable lower bound       %s\n", opt_str(r["stable_lower"]).c_str());
  std::printf("  thick upper (given C)    %s\n", r["thick_upper_conditional"].get<std::string>().c_str());
  std::printf("  criterion margin         %s\n", opt_str(r["criterion_margin"]).c_str());
  for (const char* k : {"2D", "D"}) {
    const auto& d = r["deepness"][k];
    std::printf("  deepness (%s)%*s%s\n", k, static_cast<int>(14 - std::string(k).size()), "",
                d.is_null() ? "-" : d["overall"].get<std::string>().c_str());
  }
  std::printf("  verdict                  %s\n", r["verdict"].get<std::string>().c_str());
  for (const auto& why : r["reasons"]) std::printf("    - %s\n", why.get<std::string>().c_str());
  std::printf("  conclusion               %s\n", r["conclusion"]["text"].get<std::string>().c_str());
}

int cmd_certify(const Common& o, const std::string& cls_text, const std::string& slope_text) {
  const auto bundle = parse_manifold(read_json_file(o.manifold));
  const auto constants = resolve_constants(o, &bundle);
  const Json doc = certify_document(bundle, parse_int_list(cls_text, "class"), parse_slope_list(slope_text), constants);
  emit(o, doc);
  if (!o.json) print_report(doc["report"]);
  return 0;
}

int cmd_family(const Common& o, const std::string& spec_path) {
  const auto bundle = parse_manifold(read_json_file(o.manifold));
  const auto spec = parse_family(read_json_file(spec_path));
  const auto constants = resolve_constants(o, &bundle);
  const Json doc = family_document(spec, bundle, constants, o.jobs);
  emit(o, doc);
  if (o.json) return 0;
  const auto& t = doc["table"];
  std::printf("%-5s %-22s %-12s %-14s %-14s %-14s %s\n", "n", "slope", "ell", "lower", "3 x upper", "margin", "verdict");
  for (const auto& row : t["rows"]) {
    const auto& r = row["report"];
    std::string s;
    for (const auto& pq : row["slope"]) {
      if (!s.empty()) s += ';';
      s += std::to_string(pq[0].get<long long>()) + "," + std::to_string(pq[1].get<long long>());
    }
    const auto num = [](const Json& v) { return v.is_null() ? std::string("-") : v.get<std::string>(); };
    const auto short_num = [&](const Json& v) {
      if (v.is_null()) return std::string("-");
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", std::stod(num(v)));
      return std::string(buf);
    };
    const Json three_upper = format_real(3.0 * std::stod(r["thick_upper_conditional"].get<std::string>()));
    std::printf("%-5lld %-22s %-12s %-14s %-14s %-14s %s\n", row["n"].get<long long>(), s.c_str(),
                short_num(r["ell"]).c_str(), short_num(r["stable_lower"]).c_str(), short_num(three_upper).c_str(),
                short_num(r["criterion_margin"]).c_str(), r["verdict"].get<std::string>().c_str());
  }
  for (const auto& sk : t["skipped"]) {
    std::printf("skipped n = %lld: slope on cusp %zu divisible by %lld\n", sk["n"].get<long long>(),
                sk["cusp"].get<std::size_t>(), sk["gcd"].get<long long>());
  }
  const auto& th = t["threshold"];
  if (!th["N"].is_null()) {
    std::printf("threshold N = %lld\n", th["N"].get<long long>());
  } else {
    std::printf("no N: inequality fails at the last index %lld\n", th["trailing_violation"].get<long long>());
  }
  return 0;
}

int cmd_verify_tubes(const Common& o, const PropertyConfig& cfg, const std::string& suite) {
  std::vector<std::pair<std::string, PropertyStats (*)(const PropertyConfig&)>> all = {
      {"factor", check_projection_factor},
      {"curves", check_projection_curves},
      {"arcs", check_arc_margins},
      {"shortening", check_shortening},
  };
  Json results = Json::array();
  std::size_t total = 0;
  bool ran = false;
  for (const auto& [key, fn] : all) {
    if (suite != "all" && suite != key) continue;
    ran = true;
    const auto t0 = std::chrono::steady_clock::now();
    const PropertyStats st = fn(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    total += st.violations;
    results.push_back({{"suite", key},
                       {"name", st.name},
                       {"samples", st.samples},
                       {"skipped", st.skipped},
                       {"violations", st.violations},
                       {"worst_margin", format_real(st.worst_margin)},
                       {"first_violation", st.first_violation ? Json(*st.first_violation) : Json(nullptr)},
                       {"detail", st.first_violation_detail}});
    if (!o.json) {
      std::printf("%-28s samples %-8zu skipped %-6zu violations %-6zu worst margin %.6g  (%.1f s)\n", st.name.c_str(),
                  st.samples, st.skipped, st.violations, st.worst_margin, secs);
      if (st.first_violation) {
        std::printf("  first violation at sample %zu: %s\n", *st.first_violation, st.first_violation_detail.c_str());
      }
    }
  }
  if (!ran) throw InputError("suite: expected all, factor, curves, arcs or shortening");
  const Json doc = {{"schema", kSchema}, {"kind", "verify-tubes"}, {"seed", cfg.seed}, {"samples", cfg.samples},
                    {"results", results}, {"violations", total}};
  emit(o, doc);
  if (!o.json) std::printf("%zu violations\n", total);
  return total == 0 ? 0 : kExitViolation;
}

int cmd_recheck(const Common& o, const std::string& report_path) {
  const Json stored = read_json_file(report_path);
  const Json fresh = recompute_document(stored, o.jobs);
  const bool same = stored.dump() == fresh.dump();
  if (o.json) {
    std::cout << Json{{"schema", kSchema}, {"kind", "recheck"}, {"identical", same}}.dump(2) << '\n';
  } else {
    std::printf("%s\n", same ? "report reproduced exactly" : "report differs from recomputation");
  }
  return same ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Core-curve certification for Dehn fillings"};
  app.require_subcommand(1);
  Common o;

  const auto add_output = [&](CLI::App* sc) {
    sc->add_flag("--json", o.json, "Print machine-readable JSON");
    sc->add_option("--out", o.out, "Write the JSON document to this file");
  };
  const auto add_constants = [&](CLI::App* sc) {
    sc->add_option("--constants", o.constants, "Constants file overriding the manifold's");
    sc->add_option("-C", o.C, "Thick norm constant C");
  };

  std::string slope_text, cls_text, spec_path, report_path, suite = "all";
  double ell = 0.0;
  std::optional<std::int64_t> cusps;
  PropertyConfig cfg;
  cfg.samples = 1000;
  cfg.seed = 7;

  auto* slope = app.add_subcommand("slope", "Slope lengths on the cusp tori");
  slope->add_option("--manifold", o.manifold, "Manifold file")->required();
  slope->add_option("--slope", slope_text, "Complete slope \"p,q;p,q\"")->required();
  add_output(slope);

  auto* nz = app.add_subcommand("nz", "Core length window for a total normalized length");
  nz->add_option("--ell", ell, "Total normalized length")->required();
  nz->add_option("--cusps", cusps, "Also print the stable norm lower bound for this many cusps");
  add_output(nz);

  auto* certify = app.add_subcommand("certify", "Certify a single filling");
  certify->add_option("--manifold", o.manifold, "Manifold file")->required();
  certify->add_option("--class", cls_text, "Cohomology class \"a,b,...\"")->required();
  certify->add_option("--slope", slope_text, "Complete slope \"p,q;p,q\"")->required();
  add_constants(certify);
  add_output(certify);

  auto* family = app.add_subcommand("family", "Certification table for a surgery family");
  family->add_option("--manifold", o.manifold, "Manifold file")->required();
  family->add_option("--spec", spec_path, "Family file")->required();
  family->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  add_constants(family);
  add_output(family);

  auto* verify = app.add_subcommand("verify-tubes", "Randomized checks of the tube estimates");
  verify->add_option("--samples", cfg.samples, "Samples per property");
  verify->add_option("--seed", cfg.seed, "Seed");
  verify->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  verify->add_option("--suite", suite, "all, factor, curves, arcs or shortening");
  add_output(verify);

  auto* recheck = app.add_subcommand("recheck", "Recompute a report from its embedded inputs");
  recheck->add_option("--report", report_path, "Report file")->required();
  recheck->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  recheck->add_flag("--json", o.json, "Print machine-readable JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*slope) return cmd_slope(o, slope_text);
    if (*nz) return cmd_nz(o, ell, cusps);
    if (*certify) return cmd_certify(o, cls_text, slope_text);
    if (*family) return cmd_family(o, spec_path);
    if (*verify) return cmd_verify_tubes(o, cfg, suite);
    if (*recheck) return cmd_recheck(o, report_path);
  } catch (const InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInput;
  } catch (const HypothesisError& e) {
    std::fprintf(stderr, "hypothesis failure: %s\n", e.what());
    return kExitHypothesis;
  }
  return 0;
}
