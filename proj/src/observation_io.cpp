#include "caid/observation_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "caid/errors.hpp"

namespace caid {

namespace {

using nlohmann::json;

bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t") == std::string_view::npos;
}

// Row string check shared by both formats; returns an error message or empty.
std::string check_row(std::string_view row, std::size_t expected, bool first) {
    if (row.empty()) return "empty row";
    for (char c : row) {
        if (c != '0' && c != '1' && c != '?') {
            return std::string("invalid cell symbol '") + c + "', expected 0, 1 or ?";
        }
        if (first && c == '?') return "unknown cell in the first row of an observation";
    }
    if (expected != 0 && row.size() != expected) {
        return "ragged row: " + std::to_string(row.size()) + " cells, expected " + std::to_string(expected);
    }
    return {};
}

}  // namespace

ObservationSet parse_text(std::string_view text) {
    std::vector<Observation> observations;
    std::vector<std::string> block;
    std::size_t line_no = 0;

    auto flush = [&] {
        if (!block.empty()) observations.emplace_back(block);
        block.clear();
    };

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        ++line_no;
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (is_blank(line)) {
            flush();
            if (end == text.size()) break;
            continue;
        }
        const std::size_t expected = block.empty() ? 0 : block.front().size();
        if (auto err = check_row(line, expected, block.empty()); !err.empty()) {
            throw ParseError(err, line_no);
        }
        block.emplace_back(line);
        if (end == text.size()) break;
    }
    flush();
    if (observations.empty()) throw ParseError("no observations in input", 0);
    return ObservationSet(std::move(observations));
}

std::string serialize_text(const ObservationSet& set) {
    std::string out;
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (i > 0) out += '\n';
        for (const auto& row : set[i].to_strings()) {
            out += row;
            out += '\n';
        }
    }
    return out;
}

ObservationSet parse_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), 0);
    }
    if (!doc.is_object() || !doc.contains("observations") || !doc["observations"].is_array()) {
        throw ParseError("expected an object with an \"observations\" array", 0);
    }
    for (const auto& [key, _] : doc.items()) {
        if (key != "observations" && key != "metadata") throw ParseError("unknown key \"" + key + "\"", 0);
    }
    std::vector<Observation> observations;
    std::size_t i = 0;
    for (const auto& rows : doc["observations"]) {
        ++i;
        if (!rows.is_array() || rows.empty()) {
            throw ParseError("observation " + std::to_string(i) + " must be a non-empty array of rows", 0);
        }
        std::vector<std::string> block;
        for (const auto& row : rows) {
            if (!row.is_string()) throw ParseError("observation " + std::to_string(i) + ": rows must be strings", 0);
            const auto& s = row.get_ref<const std::string&>();
            const std::size_t expected = block.empty() ? 0 : block.front().size();
            if (auto err = check_row(s, expected, block.empty()); !err.empty()) {
                throw ParseError("observation " + std::to_string(i) + ", row " + std::to_string(block.size() + 1) +
                                     ": " + err,
                                 0);
            }
            block.push_back(s);
        }
        observations.emplace_back(block);
    }
    if (observations.empty()) throw ParseError("no observations in input", 0);

    SetMetadata meta;
    if (doc.contains("metadata")) {
        const auto& m = doc["metadata"];
        if (!m.is_object()) throw ParseError("\"metadata\" must be an object", 0);
        auto read = [&](const char* key, auto& field) {
            if (!m.contains(key) || m[key].is_null()) return;
            if (!m[key].is_number_unsigned()) {
                throw ParseError(std::string("metadata field \"") + key + "\" must be a non-negative integer", 0);
            }
            field = m[key].get<typename std::remove_reference_t<decltype(field)>::value_type>();
        };
        for (const auto& [key, _] : m.items()) {
            if (key != "rule" && key != "T" && key != "seed" && key != "k") {
                throw ParseError("unknown metadata key \"" + key + "\"", 0);
            }
        }
        read("rule", meta.rule);
        read("T", meta.gap_bound);
        read("seed", meta.seed);
        read("k", meta.k);
    }
    return ObservationSet(std::move(observations), meta);
}

std::string serialize_json(const ObservationSet& set) {
    json doc;
    doc["observations"] = json::array();
    for (const auto& obs : set) doc["observations"].push_back(obs.to_strings());
    json meta = json::object();
    const auto& m = set.metadata();
    if (m.rule) meta["rule"] = *m.rule;
    if (m.gap_bound) meta["T"] = *m.gap_bound;
    if (m.seed) meta["seed"] = *m.seed;
    if (m.k) meta["k"] = *m.k;
    doc["metadata"] = meta;
    return doc.dump(1) + "\n";
}

ObservationSet load_observations(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string(), 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool as_json = path.extension() == ".json" || (first != std::string::npos && text[first] == '{');
    return as_json ? parse_json(text) : parse_text(text);
}

void save_observations(const std::filesystem::path& path, const ObservationSet& set) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << (path.extension() == ".json" ? serialize_json(set) : serialize_text(set));
}

}  // namespace caid
