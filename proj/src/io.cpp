#include "pptgeo/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pptgeo {

std::string format_real(double v) {
    if (v == 0.0) return "0";  // canonicalize -0 so round-trips are byte-stable
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string checksum_hex(const std::string& bytes) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

namespace {

void escape_json(const std::string& s, std::string& out) {
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    out += '"';
}

}  // namespace

JsonValue JsonValue::object() {
    JsonValue v;
    v.v_ = std::make_shared<Object>();
    return v;
}

JsonValue JsonValue::array() {
    JsonValue v;
    v.v_ = std::make_shared<Array>();
    return v;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
    auto* obj = std::get_if<std::shared_ptr<Object>>(&v_);
    require(obj != nullptr, "JsonValue::set: not an object");
    (**obj)[key] = std::move(v);
    return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
    auto* arr = std::get_if<std::shared_ptr<Array>>(&v_);
    require(arr != nullptr, "JsonValue::push: not an array");
    (*arr)->push_back(std::move(v));
    return *this;
}

void JsonValue::dump_to(std::string& out) const {
    if (std::holds_alternative<std::nullptr_t>(v_)) {
        out += "null";
    } else if (const bool* b = std::get_if<bool>(&v_)) {
        out += *b ? "true" : "false";
    } else if (const double* d = std::get_if<double>(&v_)) {
        out += format_real(*d);
    } else if (const std::int64_t* i = std::get_if<std::int64_t>(&v_)) {
        out += std::to_string(*i);
    } else if (const std::string* s = std::get_if<std::string>(&v_)) {
        escape_json(*s, out);
    } else if (auto obj = std::get_if<std::shared_ptr<Object>>(&v_)) {
        out += '{';
        bool first = true;
        for (const auto& [k, v] : **obj) {
            if (!first) out += ',';
            first = false;
            escape_json(k, out);
            out += ':';
            v.dump_to(out);
        }
        out += '}';
    } else if (auto arr = std::get_if<std::shared_ptr<Array>>(&v_)) {
        out += '[';
        bool first = true;
        for (const auto& v : **arr) {
            if (!first) out += ',';
            first = false;
            v.dump_to(out);
        }
        out += ']';
    }
}

std::string JsonValue::dump() const {
    std::string out;
    dump_to(out);
    return out;
}

namespace {

std::string cell_to_csv(const Cell& c) {
    std::string raw;
    if (const auto* i = std::get_if<std::int64_t>(&c))
        raw = std::to_string(*i);
    else if (const auto* d = std::get_if<double>(&c))
        raw = format_real(*d);
    else if (const auto* b = std::get_if<bool>(&c))
        raw = *b ? "true" : "false";
    else
        raw = std::get<std::string>(c);
    if (raw.find_first_of(",\"\n\r") == std::string::npos) return raw;
    std::string quoted = "\"";
    for (char ch : raw) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

JsonValue cell_to_json(const Cell& c) {
    if (const auto* i = std::get_if<std::int64_t>(&c)) return JsonValue(*i);
    if (const auto* d = std::get_if<double>(&c)) return JsonValue(*d);
    if (const auto* b = std::get_if<bool>(&c)) return JsonValue(*b);
    return JsonValue(std::get<std::string>(c));
}

void check_table(const Table& t) {
    require(!t.columns.empty(), "emit_table: schema has no columns");
    for (const auto& row : t.rows)
        require(row.size() == t.columns.size(),
                "emit_table: row width does not match the schema");
}

}  // namespace

std::string table_to_csv(const Table& t) {
    check_table(t);
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ',';
        out += t.columns[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += cell_to_csv(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string table_to_json(const Table& t) {
    check_table(t);
    JsonValue arr = JsonValue::array();
    for (const auto& row : t.rows) {
        JsonValue obj = JsonValue::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj.set(t.columns[i], cell_to_json(row[i]));
        arr.push(std::move(obj));
    }
    return arr.dump() + "\n";
}

void write_text_file(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string emit_table(const Table& table, const std::string& path, const std::string& format) {
    std::string bytes;
    if (format == "csv")
        bytes = table_to_csv(table);
    else if (format == "json")
        bytes = table_to_json(table);
    else
        throw std::invalid_argument("emit_table: format must be csv or json, got " + format);
    write_text_file(path, bytes);
    return checksum_hex(bytes);
}

JsonValue state_to_json_value(const FactoredState& s) {
    JsonValue root = JsonValue::object();
    JsonValue dims = JsonValue::array();
    for (std::size_t d : s.factor_dims()) dims.push(JsonValue(d));
    JsonValue tset = JsonValue::array();
    for (std::size_t t : s.transpose_set()) tset.push(JsonValue(t));
    JsonValue entries = JsonValue::array();
    for (const cplx& z : s.matrix().data()) {
        JsonValue pair = JsonValue::array();
        pair.push(JsonValue(z.real()));
        pair.push(JsonValue(z.imag()));
        entries.push(std::move(pair));
    }
    root.set("dims", std::move(dims));
    root.set("transpose_set", std::move(tset));
    root.set("entries", std::move(entries));
    return root;
}

std::string state_to_json(const FactoredState& s) { return state_to_json_value(s).dump() + "\n"; }

void write_state_json(const FactoredState& s, const std::string& path) {
    write_text_file(path, state_to_json(s));
}

FactoredState state_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("state payload is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("state payload must be a JSON object");
    for (const auto& item : j.items())
        if (item.key() != "dims" && item.key() != "transpose_set" && item.key() != "entries")
            throw std::invalid_argument("state payload has unknown key: " + item.key());
    if (!j.contains("dims") || !j.contains("transpose_set") || !j.contains("entries"))
        throw std::invalid_argument("state payload needs dims, transpose_set and entries");

    std::vector<std::size_t> dims, tset;
    std::size_t total = 1;
    for (const auto& d : j.at("dims")) {
        if (!d.is_number_unsigned() || d.get<std::uint64_t>() == 0)
            throw std::invalid_argument("state payload: dims must be positive integers");
        dims.push_back(d.get<std::size_t>());
        total *= dims.back();
    }
    for (const auto& t : j.at("transpose_set")) {
        if (!t.is_number_unsigned())
            throw std::invalid_argument("state payload: transpose_set must hold factor indices");
        tset.push_back(t.get<std::size_t>());
    }
    const auto& entries = j.at("entries");
    if (!entries.is_array() || entries.size() != total * total)
        throw std::invalid_argument("state payload: entries must hold dim^2 [re,im] pairs");

    ComplexMatrix m(total, total);
    std::size_t idx = 0;
    for (const auto& e : entries) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw std::invalid_argument("state payload: each entry must be [re, im]");
        m.data()[idx++] = cplx(e[0].get<double>(), e[1].get<double>());
    }
    if (max_hermiticity_defect(m) > 1e-9)
        throw std::invalid_argument("state payload rejected: matrix not Hermitian within 1e-9");
    // symmetrize exactly so downstream the stricter construction gate holds
    for (std::size_t r = 0; r < total; ++r)
        for (std::size_t c = r; c < total; ++c) {
            const cplx v = 0.5 * (m(r, c) + std::conj(m(c, r)));
            m(r, c) = v;
            m(c, r) = std::conj(v);
        }
    return FactoredState(std::move(m), std::move(dims), std::move(tset));
}

FactoredState read_state_json(const std::string& path) {
    return state_from_json_text(read_text_file(path));
}

std::string manifest_to_json(const RunManifest& m) {
    JsonValue root = JsonValue::object();
    root.set("experiment", m.experiment);
    root.set("version", m.version);
    root.set("duration_seconds", m.duration_seconds);
    JsonValue cfg = JsonValue::object();
    for (const auto& [k, v] : m.config_echo) cfg.set(k, v);
    root.set("config", std::move(cfg));
    JsonValue conv = JsonValue::object();
    for (const auto& [k, v] : m.convergence_counts) conv.set(k, v);
    root.set("convergence_counts", std::move(conv));
    JsonValue sums = JsonValue::object();
    for (const auto& [k, v] : m.output_checksums) sums.set(k, v);
    root.set("output_checksums", std::move(sums));
    return root.dump() + "\n";
}

void write_manifest(const RunManifest& m, const std::string& path) {
    write_text_file(path, manifest_to_json(m));
}

}  // namespace pptgeo
