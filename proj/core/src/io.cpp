#include "fpct/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fpct {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

JsonValue JsonValue::object() { JsonValue v; v.tag_ = Tag::Object; return v; }
JsonValue JsonValue::array() { JsonValue v; v.tag_ = Tag::Array; return v; }
JsonValue JsonValue::number(double x) { JsonValue v; v.tag_ = Tag::Number; v.num_ = x; return v; }
JsonValue JsonValue::integer(int64_t x) { JsonValue v; v.tag_ = Tag::Integer; v.int_ = x; return v; }
JsonValue JsonValue::boolean(bool x) { JsonValue v; v.tag_ = Tag::Boolean; v.bool_ = x; return v; }
JsonValue JsonValue::string(std::string x) {
  JsonValue v;
  v.tag_ = Tag::String;
  v.str_ = std::move(x);
  return v;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
  members_.emplace_back(key, std::move(v));
  return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
  elements_.push_back(std::move(v));
  return *this;
}

JsonValue JsonValue::number_array(const std::vector<double>& vs) {
  JsonValue a = array();
  for (double v : vs) a.push(number(v));
  return a;
}

JsonValue JsonValue::integer_array(const std::vector<int>& vs) {
  JsonValue a = array();
  for (int v : vs) a.push(integer(v));
  return a;
}

namespace {

void escape_into(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

}  // namespace

std::string JsonValue::dump() const {
  std::string out;
  switch (tag_) {
    case Tag::Number: return format_double(num_);
    case Tag::Integer: return std::to_string(int_);
    case Tag::Boolean: return bool_ ? "true" : "false";
    case Tag::String:
      escape_into(out, str_);
      return out;
    case Tag::Array: {
      out += '[';
      for (size_t i = 0; i < elements_.size(); ++i) {
        if (i) out += ',';
        out += elements_[i].dump();
      }
      out += ']';
      return out;
    }
    case Tag::Object: {
      out += '{';
      for (size_t i = 0; i < members_.size(); ++i) {
        if (i) out += ',';
        escape_into(out, members_[i].first);
        out += ':';
        out += members_[i].second.dump();
      }
      out += '}';
      return out;
    }
  }
  return out;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
  return out;
}

uint64_t fnv1a64(const void* data, size_t size) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = 14695981039346656037ull;
  for (size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex_digest(uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << bytes;
}

namespace {

[[noreturn]] void config_fail(const std::string& what) { throw ConfigError("config error: " + what); }

void apply_override(json& doc, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    config_fail("override must look like key.path=value: " + assignment);
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) parsed = value;  // bare words are strings

  json* node = &doc;
  size_t start = 0;
  std::vector<std::string> parts;
  while (start <= path.size()) {
    const size_t dot = path.find('.', start);
    parts.push_back(path.substr(start, dot == std::string::npos ? dot : dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  for (size_t i = 0; i < parts.size(); ++i) {
    const std::string& key = parts[i];
    const bool last = i + 1 == parts.size();
    if (node->is_array()) {
      size_t idx = 0;
      try {
        idx = std::stoul(key);
      } catch (const std::exception&) {
        config_fail("array index expected in override path: " + path);
      }
      if (idx >= node->size()) config_fail("override index out of range: " + path);
      if (last)
        (*node)[idx] = parsed;
      else
        node = &(*node)[idx];
    } else if (node->is_object() || node->is_null()) {
      if (last)
        (*node)[key] = parsed;
      else
        node = &(*node)[key];
    } else {
      config_fail("override path traverses a scalar: " + path);
    }
  }
}

WeightDistribution parse_distribution(const json& j) {
  const std::string kind = j.value("kind", "");
  if (kind == "uniform-interval") {
    if (!j.contains("lo") || !j.contains("hi")) config_fail("uniform-interval needs lo and hi");
    return WeightDistribution::uniform_interval(j["lo"].get<double>(), j["hi"].get<double>());
  }
  if (kind == "finite-atoms") {
    if (!j.contains("atoms") || !j.contains("probs")) config_fail("finite-atoms needs atoms and probs");
    std::vector<std::vector<double>> atoms;
    for (const auto& a : j["atoms"]) {
      if (a.is_array())
        atoms.push_back(a.get<std::vector<double>>());
      else
        atoms.push_back({a.get<double>()});
    }
    return WeightDistribution::finite_atoms(std::move(atoms), j["probs"].get<std::vector<double>>());
  }
  if (kind == "inverse-cdf") {
    if (!j.contains("points")) config_fail("inverse-cdf needs points [[u,value],...]");
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : j["points"]) {
      if (!p.is_array() || p.size() != 2) config_fail("inverse-cdf points must be [u,value] pairs");
      pts.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return WeightDistribution::inverse_cdf_table(std::move(pts));
  }
  config_fail("unknown distribution kind: '" + kind + "'");
}

EnvironmentSpec parse_medium(const json& j, uint64_t default_seed, const std::string& base_dir) {
  const std::string kind = j.value("kind", "");
  const uint64_t seed = j.value("seed", default_seed);
  if (kind == "constant") {
    if (!j.contains("d") || !j.contains("c")) config_fail("constant medium needs d and c");
    return EnvironmentSpec::constant(j["d"].get<int>(), j["c"].get<double>());
  }
  if (kind == "explicit") {
    if (!j.contains("d") || !j.contains("csv") || !j.contains("a") || !j.contains("b"))
      config_fail("explicit medium needs d, csv, a, b");
    std::string path = j["csv"].get<std::string>();
    if (!path.empty() && path[0] != '/' && !base_dir.empty()) path = base_dir + "/" + path;
    return EnvironmentSpec::explicit_table(
        load_explicit_csv(path, j["d"].get<int>(),
                          BoundsSpec(j["a"].get<double>(), j["b"].get<double>())));
  }
  if (!j.contains("d") || !j.contains("distribution"))
    config_fail("medium needs d and distribution");
  const int d = j["d"].get<int>();
  WeightDistribution dist = parse_distribution(j["distribution"]);
  if (kind == "iid-edges") return EnvironmentSpec::iid_edges(d, std::move(dist), seed);
  if (kind == "iid-undirected") return EnvironmentSpec::iid_undirected(d, std::move(dist), seed);
  if (kind == "hyperplane-symmetric")
    return EnvironmentSpec::hyperplane_symmetric(d, std::move(dist), seed);
  if (kind == "periodic") {
    if (!j.contains("period")) config_fail("periodic medium needs period");
    return EnvironmentSpec::periodic(j["period"].get<std::vector<int>>(), std::move(dist), seed);
  }
  config_fail("unknown medium kind: '" + kind + "'");
}

MarginalSpec parse_marginal(const json& j) {
  const std::string kind = j.value("kind", "");
  if (kind == "uniform-interval")
    return MarginalSpec::uniform_interval(j.at("lo").get<double>(), j.at("hi").get<double>());
  if (kind == "finite-atoms")
    return MarginalSpec::finite_atoms(j.at("values").get<std::vector<double>>(),
                                      j.at("probs").get<std::vector<double>>());
  if (kind == "piecewise-linear")
    return MarginalSpec::piecewise_linear(j.at("x").get<std::vector<double>>(),
                                          j.at("u").get<std::vector<double>>());
  config_fail("unknown marginal kind: '" + kind + "'");
}

const json parse_job_raw(const JobSpec& job) {
  json j = json::parse(job.raw, nullptr, false);
  if (j.is_discarded()) config_fail("job '" + job.name + "' is not valid JSON");
  return j;
}

}  // namespace

ToolkitConfig parse_config(const std::string& json_text,
                           const std::vector<std::string>& overrides,
                           const std::string& base_dir,
                           std::optional<uint64_t> seed_override) {
  if (json_text.find_first_not_of(" \t\r\n") == std::string::npos)
    config_fail("empty config");
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) config_fail("config is not valid JSON");
  if (!doc.is_object()) config_fail("config root must be an object");
  for (const std::string& o : overrides) apply_override(doc, o);
  if (seed_override) doc["seed"] = *seed_override;

  ToolkitConfig cfg;
  cfg.digest = hex_digest(fnv1a64(doc.dump().data(), doc.dump().size()));
  try {
    if (doc.contains("schema")) {
      cfg.schema = doc["schema"].get<int>();
      if (cfg.schema != 1) config_fail("unsupported schema version");
    }
    cfg.seed = doc.value("seed", static_cast<uint64_t>(1));
    if (doc.contains("tolerances")) {
      for (const auto& [k, v] : doc["tolerances"].items()) {
        const double tol = v.get<double>();
        if (!(tol > 0)) config_fail("tolerance '" + k + "' must be positive");
        cfg.tolerances[k] = tol;
      }
    }
    if (doc.contains("media"))
      for (const auto& [name, j] : doc["media"].items())
        cfg.media.emplace(name, parse_medium(j, cfg.seed, base_dir));
    if (doc.contains("marginals"))
      for (const auto& [name, j] : doc["marginals"].items())
        cfg.marginals.emplace(name, parse_marginal(j));
    if (doc.contains("jobs")) {
      if (!doc["jobs"].is_array()) config_fail("jobs must be an array");
      int idx = 0;
      for (const auto& j : doc["jobs"]) {
        if (!j.is_object() || !j.contains("command")) config_fail("each job needs a command");
        JobSpec job;
        job.command = j["command"].get<std::string>();
        job.name = j.value("name", job.command + "-" + std::to_string(idx));
        job.format = j.value("format", "json-lines");
        if (job.format != "json-lines" && job.format != "csv")
          config_fail("job '" + job.name + "': format must be json-lines or csv");
        job.raw = j.dump();
        cfg.jobs.push_back(std::move(job));
        ++idx;
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    config_fail(e.what());
  }
  return cfg;
}

double job_number(const JobSpec& job, const std::string& key, std::optional<double> fallback) {
  const json j = parse_job_raw(job);
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    config_fail("job '" + job.name + "' needs parameter '" + key + "'");
  }
  if (!j[key].is_number()) config_fail("job '" + job.name + "': '" + key + "' must be a number");
  return j[key].get<double>();
}

int64_t job_integer(const JobSpec& job, const std::string& key, std::optional<int64_t> fallback) {
  const json j = parse_job_raw(job);
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    config_fail("job '" + job.name + "' needs parameter '" + key + "'");
  }
  if (!j[key].is_number_integer()) config_fail("job '" + job.name + "': '" + key + "' must be an integer");
  return j[key].get<int64_t>();
}

std::string job_string(const JobSpec& job, const std::string& key, const std::string& fallback) {
  const json j = parse_job_raw(job);
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) config_fail("job '" + job.name + "': '" + key + "' must be a string");
  return j[key].get<std::string>();
}

bool job_has(const JobSpec& job, const std::string& key) { return parse_job_raw(job).contains(key); }

std::vector<double> job_number_list(const JobSpec& job, const std::string& key,
                                    const std::vector<double>& fallback) {
  const json j = parse_job_raw(job);
  if (!j.contains(key)) return fallback;
  try {
    return j[key].get<std::vector<double>>();
  } catch (const std::exception&) {
    config_fail("job '" + job.name + "': '" + key + "' must be a list of numbers");
  }
}

std::vector<int> job_integer_list(const JobSpec& job, const std::string& key,
                                  const std::vector<int>& fallback) {
  const json j = parse_job_raw(job);
  if (!j.contains(key)) return fallback;
  try {
    return j[key].get<std::vector<int>>();
  } catch (const std::exception&) {
    config_fail("job '" + job.name + "': '" + key + "' must be a list of integers");
  }
}

AtomicMedium atomic_from_spec(const EnvironmentSpec& spec) {
  if (spec.kind != EnvironmentSpec::Kind::HyperplaneSymmetric)
    throw std::invalid_argument("symmetric-minimization medium must be hyperplane-symmetric");
  if (spec.distribution.kind() != WeightDistribution::Kind::FiniteAtoms)
    throw std::invalid_argument("symmetric-minimization medium must have finite atoms");
  std::vector<std::vector<double>> atoms;
  for (const auto& atom : spec.distribution.atoms()) {
    if (static_cast<int>(atom.size()) == spec.d)
      atoms.push_back(atom);
    else
      atoms.push_back(std::vector<double>(spec.d, atom.at(0)));
  }
  return AtomicMedium(spec.d, std::move(atoms), spec.distribution.probs());
}

}  // namespace fpct
