#pragma once

// JSON files: manifold, family and report documents, schema "lamcert-v1".
// Reals are written as "%.17g" strings; readers accept numbers or strings.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "lamcert/bundle.hpp"
#include "lamcert/certify.hpp"
#include "lamcert/family.hpp"

namespace lamcert {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "lamcert-v1";

std::string format_real(double v);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& doc);

/// "p,q;p,q;..." one pair per cusp.
CompleteSlope parse_slope_list(const std::string& text, const std::string& field = "slope");
std::string format_slope_list(const CompleteSlope& slope);
/// "a,b,c" integers.
std::vector<std::int64_t> parse_int_list(const std::string& text, const std::string& field);

ManifoldBundle parse_manifold(const Json& doc);
Json to_json(const ManifoldBundle& bundle);

AssumptionBundle parse_constants(const Json& doc, const std::string& field = "constants");
Json to_json(const AssumptionBundle& constants);

FamilySpec parse_family(const Json& doc);
Json to_json(const FamilySpec& spec);

Json to_json(const DeepnessVerdict& v);
Json to_json(const CertificationReport& report);
Json to_json(const ThresholdResult& t);
Json to_json(const FamilyTable& table);

/// Report for one filling with its inputs embedded.
Json certify_document(const ManifoldBundle& bundle, const CohomologyClass& cls,
                      const CompleteSlope& slope, const AssumptionBundle& constants);
/// Family table with the manifold, spec and constants embedded.
Json family_document(const FamilySpec& spec, const ManifoldBundle& bundle,
                     const AssumptionBundle& constants, unsigned jobs);

/// Re-runs the computation from the inputs embedded in a report and returns
/// the fresh document.
Json recompute_document(const Json& report, unsigned jobs = 1);

}  // namespace lamcert
