#include "vhb/table_io.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vhb {

using nlohmann::json;

namespace {

using Code = GeometryError::Code;

ParsedRational rational_field(const json& j, const std::string& where) {
    if (j.is_string()) {
        try {
            return parse_rational_literal(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw GeometryError(Code::BadFormat, where + ": " + e.what());
        }
    }
    if (j.is_number_integer()) return {Rational(j.get<std::int64_t>()), false};
    if (j.is_number()) {
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, j.get<double>());
        (void)ec;
        return parse_rational_literal(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
    }
    throw GeometryError(Code::BadFormat, where + ": expected rational string or number");
}

VHPolygon polygon_field(const json& j, const std::string& where, bool& inexact) {
    if (!j.is_object() || !j.contains("word") || !j.contains("lengths") || !j["lengths"].is_array()) {
        throw GeometryError(Code::BadFormat, where + ": expected {\"word\", \"lengths\"}");
    }
    std::vector<Rational> lengths;
    for (std::size_t i = 0; i < j["lengths"].size(); ++i) {
        auto r = rational_field(j["lengths"][i], where + ".lengths[" + std::to_string(i) + "]");
        inexact = inexact || r.decimal;
        lengths.push_back(std::move(r.value));
    }
    return polygon_from_text(j["word"].get<std::string>(), std::move(lengths));
}

json polygon_json(const VHPolygon& p) {
    json lengths = json::array();
    for (const auto& l : p.lengths()) lengths.push_back(to_string(l));
    return json{{"word", p.word().str()}, {"lengths", lengths}};
}

json table_json(const VHTable& t) {
    json holes = json::array();
    for (const auto& h : t.holes()) {
        json hj = polygon_json(h.polygon);
        hj["anchor"] = json::array({to_string(h.anchor.x), to_string(h.anchor.y)});
        holes.push_back(hj);
    }
    json out{{"outer", polygon_json(t.outer())}, {"holes", holes}};
    if (t.inexact()) out["inexact"] = true;
    return out;
}

}  // namespace

VHTable table_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw GeometryError(Code::BadFormat, std::string("table file is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("outer")) {
        throw GeometryError(Code::BadFormat, "table file needs an \"outer\" entry");
    }
    bool inexact = j.value("inexact", false);
    VHPolygon outer = polygon_field(j["outer"], "outer", inexact);
    std::vector<Hole> holes;
    if (j.contains("holes")) {
        const json& hs = j["holes"];
        if (!hs.is_array()) throw GeometryError(Code::BadFormat, "\"holes\" must be an array");
        for (std::size_t h = 0; h < hs.size(); ++h) {
            const std::string where = "holes[" + std::to_string(h) + "]";
            VHPolygon poly = polygon_field(hs[h], where, inexact);
            if (!hs[h].contains("anchor") || !hs[h]["anchor"].is_array() || hs[h]["anchor"].size() != 2) {
                throw GeometryError(Code::BadFormat, where + ": expected \"anchor\": [x, y]");
            }
            auto ax = rational_field(hs[h]["anchor"][0], where + ".anchor[0]");
            auto ay = rational_field(hs[h]["anchor"][1], where + ".anchor[1]");
            inexact = inexact || ax.decimal || ay.decimal;
            holes.push_back(Hole{std::move(poly), Point{ax.value, ay.value}});
        }
    }
    return VHTable::build(std::move(outer), std::move(holes), inexact);
}

std::string table_to_json(const VHTable& table, int indent) { return table_json(table).dump(indent); }

VHTable read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw GeometryError(Code::BadFormat, "cannot open table file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return table_from_json(ss.str());
}

void write_table(const std::filesystem::path& path, const VHTable& table) {
    std::ofstream out(path);
    if (!out) throw GeometryError(Code::BadFormat, "cannot write table file " + path.string());
    out << table_to_json(table) << "\n";
}

std::uint64_t table_hash(const VHTable& table) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : table_json(table).dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex_hash(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace vhb
