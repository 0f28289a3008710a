#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "pptgeo/operators.hpp"

namespace pptgeo {

// shortest-stable decimal with 17 significant digits; round-trips doubles
std::string format_real(double v);

std::uint64_t fnv1a64(const std::string& bytes);
std::string checksum_hex(const std::string& bytes);

// Minimal deterministic JSON tree: object keys are kept sorted, reals are
// printed with format_real, so equal values serialize to equal bytes.
class JsonValue {
  public:
    JsonValue() : v_(nullptr) {}
    JsonValue(bool b) : v_(b) {}
    JsonValue(double d) : v_(d) {}
    JsonValue(std::int64_t i) : v_(i) {}
    JsonValue(std::uint64_t u) : v_(static_cast<std::int64_t>(u)) {}
    JsonValue(int i) : v_(static_cast<std::int64_t>(i)) {}
    JsonValue(const char* s) : v_(std::string(s)) {}
    JsonValue(std::string s) : v_(std::move(s)) {}

    static JsonValue object();
    static JsonValue array();

    JsonValue& set(const std::string& key, JsonValue v);  // object only
    JsonValue& push(JsonValue v);                         // array only

    std::string dump() const;

  private:
    struct ObjectTag {};
    struct ArrayTag {};
    using Object = std::map<std::string, JsonValue>;
    using Array = std::vector<JsonValue>;
    std::variant<std::nullptr_t, bool, double, std::int64_t, std::string,
                 std::shared_ptr<Object>, std::shared_ptr<Array>>
        v_;

    void dump_to(std::string& out) const;
};

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// Writes the table to path in "csv" or "json" format and returns the FNV-1a64
// checksum (hex) of the bytes written. Row widths must match the schema.
std::string emit_table(const Table& table, const std::string& path, const std::string& format);

std::string table_to_csv(const Table& table);
std::string table_to_json(const Table& table);

void write_text_file(const std::string& path, const std::string& bytes);
std::string read_text_file(const std::string& path);

// Matrix payload {"dims", "transpose_set", "entries": [[re,im],...]} row-major.
JsonValue state_to_json_value(const FactoredState& s);
std::string state_to_json(const FactoredState& s);
void write_state_json(const FactoredState& s, const std::string& path);

// Rejects payloads whose matrix is non-Hermitian beyond 1e-9; accepted
// payloads are symmetrized exactly before constructing the state.
FactoredState read_state_json(const std::string& path);
FactoredState state_from_json_text(const std::string& text);

struct RunManifest {
    std::string experiment;
    std::string version;
    double duration_seconds = 0.0;
    std::map<std::string, std::string> config_echo;
    std::map<std::string, std::int64_t> convergence_counts;
    std::map<std::string, std::string> output_checksums;  // path -> fnv1a64 hex
};

std::string manifest_to_json(const RunManifest& m);
void write_manifest(const RunManifest& m, const std::string& path);

}  // namespace pptgeo
