#include "rbx/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>

namespace rbx::report {

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out.push_back('"');
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          static const char* hex = "0123456789abcdef";
          out += "\\u00";
          out.push_back(hex[(c >> 4) & 0xF]);
          out.push_back(hex[c & 0xF]);
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
  out.push_back('"');
}

void append_double(std::string& out, double x) {
  if (!std::isfinite(x)) {
    out += "null";
    return;
  }
  char buf[64];
  auto result = std::to_chars(buf, buf + sizeof(buf), x,
                              std::chars_format::general, 17);
  out.append(buf, result.ptr);
}

void write_value(std::string& out, const Json& j, int depth) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::null:
      out += "null";
      break;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      break;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      break;
    case Json::value_t::number_float:
      append_double(out, j.get<double>());
      break;
    case Json::value_t::string:
      append_escaped(out, j.get<std::string>());
      break;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      out.push_back('[');
      bool first = true;
      for (const auto& item : j) {
        if (!first) out.push_back(',');
        first = false;
        out.push_back('\n');
        out += inner;
        write_value(out, item, depth + 1);
      }
      out.push_back('\n');
      out += indent;
      out.push_back(']');
      break;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out.push_back('{');
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out.push_back(',');
        first = false;
        out.push_back('\n');
        out += inner;
        append_escaped(out, it.key());
        out += ": ";
        write_value(out, it.value(), depth + 1);
      }
      out.push_back('\n');
      out += indent;
      out.push_back('}');
      break;
    }
    default:
      out += "null";
  }
}

}  // namespace

std::string to_canonical_string(const Json& j) {
  std::string out;
  write_value(out, j, 0);
  out.push_back('\n');
  return out;
}

Json vector_json(const Vector& v) {
  Json arr = Json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

Json basis_json(const std::vector<Vector>& basis) {
  Json arr = Json::array();
  for (const Vector& v : basis) arr.push_back(vector_json(v));
  return arr;
}

Json subspace_json(const Subspace& s) {
  Json j = Json::object();
  j["ambient_dim"] = s.ambient_dim();
  j["dim"] = s.dim();
  j["basis"] = basis_json(s.basis());
  return j;
}

Json dataset_digest_json(const Dataset& d) {
  Json j = Json::object();
  j["count"] = d.size();
  j["dim"] = d.ambient_dim();
  j["total_weight"] = d.total_weight();
  return j;
}

Json config_json(const io::RunConfig& cfg, std::size_t resolved_dim) {
  Json j = Json::object();
  j["ambient_dim"] = resolved_dim;
  j["lambda"] = cfg.lambda;
  Json loss = Json::object();
  loss["kind"] = cfg.loss_kind;
  if (cfg.loss_kind == "scaled-log") loss["scale"] = cfg.loss_scale;
  j["loss"] = loss;
  j["tol"] = cfg.tol;
  j["rank_bound"] = cfg.rank_bound.value_or(static_cast<int>(resolved_dim));
  j["seed"] = cfg.seed;
  return j;
}

Json proposal_json(const ExtensionProposal& p) {
  Json j = Json::object();
  j["direction"] = p.has_direction() ? vector_json(p.direction) : Json();
  j["gain"] = p.gain;
  j["eigenvalue"] = p.eigenvalue;
  j["eigen_gap"] = p.eigen_gap;
  j["accepted"] = p.accepted;
  j["dl_before"] = p.dl_before;
  j["dl_after"] = p.dl_after;
  return j;
}

Json trace_json(const ExtensionTrace& t) {
  Json steps = Json::array();
  for (const auto& step : t.steps) steps.push_back(proposal_json(step));
  Json j = Json::object();
  j["steps"] = steps;
  j["stop_reason"] = to_string(t.stop_reason);
  j["accepted_dims"] = t.accepted_steps();
  j["final_basis"] = basis_json(t.final_space.basis());
  return j;
}

Json mechanism_json(const MechanismReport& m) {
  Json j = Json::object();
  j["dim_w_ext"] = m.dim_w_ext;
  j["dim_w_all"] = m.dim_w_all;
  j["enrichment"] = m.enrichment;
  j["new_directions"] = basis_json(m.new_directions);
  j["amplification"] = m.amplification;
  j["classification"] = to_string(m.classification);
  j["proposal_ext"] = proposal_json(m.proposal_ext);
  j["proposal_all"] = proposal_json(m.proposal_all);
  return j;
}

Json check_report_json(const verify::CheckReport& r) {
  Json failures = Json::array();
  for (const auto& f : r.failures) {
    Json entry = Json::object();
    entry["seed"] = f.seed;
    entry["digest"] = f.digest;
    entry["observed"] = f.observed;
    entry["bound"] = f.bound;
    failures.push_back(entry);
  }
  Json j = Json::object();
  j["name"] = r.name;
  j["instances"] = r.instances;
  j["passed"] = r.passed();
  j["max_deviation"] = r.max_deviation;
  j["failures"] = failures;
  return j;
}

Json run_report_header(const std::string& command, const io::RunConfig& cfg,
                       std::size_t resolved_dim, const Dataset& d) {
  Json j = Json::object();
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["config"] = config_json(cfg, resolved_dim);
  j["dataset"] = dataset_digest_json(d);
  return j;
}

}  // namespace rbx::report
