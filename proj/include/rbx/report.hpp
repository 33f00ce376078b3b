#ifndef RBX_REPORT_HPP
#define RBX_REPORT_HPP

#include <string>

#include <json.hpp>

#include "rbx/extension.hpp"
#include "rbx/imagination.hpp"
#include "rbx/io.hpp"
#include "rbx/types.hpp"
#include "rbx/verify.hpp"

namespace rbx::report {

using Json = nlohmann::ordered_json;

constexpr const char* kSchemaVersion = "1";

// Canonical serialization: stable key order, reals rendered with 17
// significant digits via locale-independent to_chars, 2-space indentation,
// trailing newline. Identical documents produce identical bytes.
std::string to_canonical_string(const Json& j);

Json vector_json(const Vector& v);
Json basis_json(const std::vector<Vector>& basis);
Json subspace_json(const Subspace& s);
Json dataset_digest_json(const Dataset& d);
Json config_json(const io::RunConfig& cfg, std::size_t resolved_dim);
Json proposal_json(const ExtensionProposal& p);
Json trace_json(const ExtensionTrace& t);
Json mechanism_json(const MechanismReport& m);
Json check_report_json(const verify::CheckReport& r);

// Shared report skeleton: schema_version + command + config echo + dataset
// digest.
Json run_report_header(const std::string& command, const io::RunConfig& cfg,
                       std::size_t resolved_dim, const Dataset& d);

}  // namespace rbx::report

#endif  // RBX_REPORT_HPP
