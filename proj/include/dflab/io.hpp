#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dflab/bdl.hpp"
#include "dflab/verify.hpp"

namespace dflab::io {

using Json = nlohmann::json;

/// Shortest decimal that parses back to the same double ("inf"/"-inf"/"nan"
/// for non-finite values).
std::string format_double(double x);

/// Parses text into JSON, mapping syntax errors to ErrorCode::Parse.
Json parse(const std::string& text);

Json to_json(const Domain& d);
Domain domain_from_json(const Json& j);

Json to_json(const FormMatrix& f);
FormMatrix form_from_json(const Json& j);

/// Array of numbers and the string "inf".
Json to_json(const BoundaryMeasure& mu);
BoundaryMeasure measure_from_json(const Json& j);
Eigen::MatrixXd matrix_from_json(const Json& j);

Json to_json(const BdlParts& parts, const Domain& domain);
Json to_json(const LocalityClass& loc);
Json to_json(const PositivityReport& r);
Json to_json(const DominationReport& r);
Json to_json(const SandwichReport& r);
Json to_json(const MeasureExtraction& r);
Json to_json(const CharacterizationReport& r);
Json to_json(const LocalityReport& r);
Json to_json(const EventualPositivity& r);
Json to_json(const Aw45Report& r);
Json to_json(const SweepReport& r);

/// "t,min_entry" rows.
std::string profile_csv(const std::vector<std::pair<double, double>>& profile);
/// "n,h,lambda_k,reference,abs_error,observed_order" rows.
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

/// Form recipe: kind is neumann | dirichlet | robin | nonlocal-robin.
struct FormSpec {
  std::string kind;
  std::optional<BoundaryMeasure> mu;
  std::optional<Eigen::MatrixXd> b;
};

/// Batch configuration for the command-line tool. Unknown keys are rejected
/// and optional keys are echoed back only when present.
struct RunConfig {
  Json domain;
  FormSpec form;
  std::optional<std::vector<double>> times;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

RunConfig config_from_json(const Json& j);
Json to_json(const RunConfig& c);
FormMatrix build_form(const RunConfig& c);
FormMatrix build_form(const DomainPtr& domain, const FormSpec& spec);

}  // namespace dflab::io
