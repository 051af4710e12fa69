#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpct/distcompare.hpp"
#include "fpct/environment.hpp"
#include "fpct/symmin.hpp"

namespace fpct {

// Shortest round-trippable decimal form (17 significant digits).
std::string format_double(double v);

// Minimal order-preserving JSON document builder.  Output is a single line
// with keys in insertion order and doubles printed with 17 significant
// digits, so identical inputs produce identical bytes.  (Vendored parsers
// are used for reading config files; emission stays in-house to keep byte
// determinism under our control.)
class JsonValue {
 public:
  static JsonValue object();
  static JsonValue array();
  static JsonValue number(double v);
  static JsonValue integer(int64_t v);
  static JsonValue boolean(bool v);
  static JsonValue string(std::string v);

  JsonValue& set(const std::string& key, JsonValue v);        // object members
  JsonValue& push(JsonValue v);                               // array elements
  JsonValue& set(const std::string& key, double v) { return set(key, number(v)); }
  JsonValue& set(const std::string& key, int64_t v) { return set(key, integer(v)); }
  JsonValue& set(const std::string& key, int v) { return set(key, integer(v)); }
  JsonValue& set(const std::string& key, bool v) { return set(key, boolean(v)); }
  JsonValue& set(const std::string& key, const std::string& v) { return set(key, string(v)); }
  JsonValue& set(const std::string& key, const char* v) { return set(key, string(v)); }

  static JsonValue number_array(const std::vector<double>& vs);
  static JsonValue integer_array(const std::vector<int>& vs);

  std::string dump() const;

 private:
  enum class Tag { Object, Array, Number, Integer, Boolean, String };
  Tag tag_ = Tag::Object;
  double num_ = 0;
  int64_t int_ = 0;
  bool bool_ = false;
  std::string str_;
  std::vector<std::pair<std::string, JsonValue>> members_;
  std::vector<JsonValue> elements_;
};

// One CSV row; doubles go through format_double.
std::string csv_row(const std::vector<std::string>& cells);

// FNV-1a 64-bit digest of a byte string, as fixed-width hex.
uint64_t fnv1a64(const void* data, size_t size);
std::string hex_digest(uint64_t h);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

inline constexpr const char* kToolkitVersion = "0.1.0";

// ----------------------------------------------------------------------------
// Config model: a single JSON document
//   { "schema": 1, "seed": N, "media": {...}, "marginals": {...},
//     "tolerances": {...}, "jobs": [...] }
// Dotted-path overrides ("jobs.0.t=400", "media.m.seed=9") are applied to the
// raw document before conversion.
// ----------------------------------------------------------------------------

struct JobSpec {
  std::string command;   // simulate-fpp, estimate-m, solve-stationary, solve-horizon,
                         // estimate-hbar, sym-minimize, dual-norm, limit-shape,
                         // compare-distros, validate
  std::string name;      // output base name (defaults to command-<index>)
  std::string format;    // "json-lines" or "csv"
  std::string raw;       // the job's JSON object, re-serialized (parameter lookup)
};

struct ToolkitConfig {
  int schema = 1;
  uint64_t seed = 1;  // default seed for media that do not declare one
  std::map<std::string, EnvironmentSpec> media;
  std::map<std::string, MarginalSpec> marginals;
  std::map<std::string, double> tolerances;
  std::vector<JobSpec> jobs;
  std::string digest;  // hex digest of the effective (post-override) document
};

// Thrown for malformed configs; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses a config document (after applying overrides).  `base_dir` resolves
// relative CSV paths for explicit media.
ToolkitConfig parse_config(const std::string& json_text,
                           const std::vector<std::string>& overrides,
                           const std::string& base_dir,
                           std::optional<uint64_t> seed_override);

// Parameter accessors over a job's raw JSON (throwing ConfigError on type or
// range violations).
double job_number(const JobSpec& job, const std::string& key, std::optional<double> fallback = {});
int64_t job_integer(const JobSpec& job, const std::string& key, std::optional<int64_t> fallback = {});
std::string job_string(const JobSpec& job, const std::string& key, const std::string& fallback);
bool job_has(const JobSpec& job, const std::string& key);
std::vector<double> job_number_list(const JobSpec& job, const std::string& key,
                                    const std::vector<double>& fallback);
std::vector<int> job_integer_list(const JobSpec& job, const std::string& key,
                                  const std::vector<int>& fallback);

// Converts a finite-atom symmetric medium spec into the algorithm's native
// representation.
AtomicMedium atomic_from_spec(const EnvironmentSpec& spec);

}  // namespace fpct
