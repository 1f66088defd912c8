#include "seednet/network_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "seednet/errors.hpp"

namespace seednet {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(field);
    return fields;
}

[[noreturn]] void parse_fail(const std::string& label, std::size_t row, const std::string& what) {
    throw DataError(label + ":" + std::to_string(row) + ": " + what);
}

double parse_double(const std::string& text, const std::string& label, std::size_t row,
                    const std::string& column) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        parse_fail(label, row, "cannot parse " + column + " value '" + text + "'");
    return value;
}

int find_column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

struct VillageRows {
    std::vector<Individual> individuals;
    std::vector<std::pair<std::string, std::string>> edges;
};

} // namespace

std::vector<VillageNetwork> load_villages(std::istream& individuals, std::istream& edges,
                                          const std::string& individuals_label,
                                          const std::string& edges_label) {
    // Grouped by village in order of first appearance in the individuals file.
    std::vector<std::string> village_order;
    std::map<std::string, VillageRows> rows;

    std::string line;
    std::size_t row = 0;

    if (!std::getline(individuals, line))
        parse_fail(individuals_label, 1, "missing header");
    ++row;
    const auto ind_header = split_csv_line(line);
    const int col_person = find_column(ind_header, "person_id");
    const int col_household = find_column(ind_header, "household_id");
    const int col_village = find_column(ind_header, "village_id");
    const int col_lat = find_column(ind_header, "lat");
    const int col_lon = find_column(ind_header, "lon");
    if (col_person < 0 || col_household < 0 || col_village < 0)
        parse_fail(individuals_label, 1,
                   "header must contain person_id, household_id, village_id");
    if ((col_lat < 0) != (col_lon < 0))
        parse_fail(individuals_label, 1, "lat and lon columns must appear together");

    const std::size_t ind_width = ind_header.size();
    while (std::getline(individuals, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != ind_width)
            parse_fail(individuals_label, row,
                       "expected " + std::to_string(ind_width) + " fields, got " +
                           std::to_string(fields.size()));
        Individual ind;
        ind.person_id = fields[static_cast<std::size_t>(col_person)];
        ind.household_id = fields[static_cast<std::size_t>(col_household)];
        const std::string& vid = fields[static_cast<std::size_t>(col_village)];
        if (ind.person_id.empty()) parse_fail(individuals_label, row, "empty person_id");
        if (ind.household_id.empty()) parse_fail(individuals_label, row, "empty household_id");
        if (vid.empty()) parse_fail(individuals_label, row, "empty village_id");
        if (col_lat >= 0) {
            const std::string& lat = fields[static_cast<std::size_t>(col_lat)];
            const std::string& lon = fields[static_cast<std::size_t>(col_lon)];
            if (lat.empty() != lon.empty())
                parse_fail(individuals_label, row, "lat and lon must both be present or both empty");
            if (!lat.empty())
                ind.coordinates = Coordinates{
                    parse_double(lat, individuals_label, row, "lat"),
                    parse_double(lon, individuals_label, row, "lon")};
        }
        auto [it, inserted] = rows.try_emplace(vid);
        if (inserted) village_order.push_back(vid);
        it->second.individuals.push_back(std::move(ind));
    }

    row = 0;
    if (!std::getline(edges, line)) parse_fail(edges_label, 1, "missing header");
    ++row;
    const auto edge_header = split_csv_line(line);
    const int col_evillage = find_column(edge_header, "village_id");
    const int col_a = find_column(edge_header, "person_a");
    const int col_b = find_column(edge_header, "person_b");
    if (col_evillage < 0 || col_a < 0 || col_b < 0)
        parse_fail(edges_label, 1, "header must contain village_id, person_a, person_b");
    const std::size_t edge_width = edge_header.size();
    while (std::getline(edges, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != edge_width)
            parse_fail(edges_label, row,
                       "expected " + std::to_string(edge_width) + " fields, got " +
                           std::to_string(fields.size()));
        const std::string& vid = fields[static_cast<std::size_t>(col_evillage)];
        auto it = rows.find(vid);
        if (it == rows.end())
            parse_fail(edges_label, row, "edge references unknown village_id " + vid);
        it->second.edges.emplace_back(fields[static_cast<std::size_t>(col_a)],
                                      fields[static_cast<std::size_t>(col_b)]);
    }

    std::vector<VillageNetwork> out;
    out.reserve(village_order.size());
    for (const auto& vid : village_order) {
        auto& r = rows.at(vid);
        out.emplace_back(vid, std::move(r.individuals), r.edges);
    }
    return out;
}

VillageNetwork load_village(std::istream& individuals, std::istream& edges,
                            const std::string& village_id,
                            const std::string& individuals_label,
                            const std::string& edges_label) {
    auto villages = load_villages(individuals, edges, individuals_label, edges_label);
    if (villages.empty()) throw DataError(individuals_label + ": no individuals found");
    if (village_id.empty()) {
        if (villages.size() > 1)
            throw DataError(individuals_label + ": contains " +
                            std::to_string(villages.size()) +
                            " villages; pass an explicit village id");
        return std::move(villages.front());
    }
    for (auto& v : villages)
        if (v.village_id() == village_id) return std::move(v);
    throw DataError("village_id " + village_id + " not found in " + individuals_label);
}

namespace {

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file " + path);
    return in;
}

} // namespace

std::vector<VillageNetwork> load_villages_from_files(const std::string& individuals_path,
                                                     const std::string& edges_path) {
    auto ind = open_or_throw(individuals_path);
    auto edg = open_or_throw(edges_path);
    return load_villages(ind, edg, individuals_path, edges_path);
}

VillageNetwork load_village_from_files(const std::string& individuals_path,
                                       const std::string& edges_path,
                                       const std::string& village_id) {
    auto ind = open_or_throw(individuals_path);
    auto edg = open_or_throw(edges_path);
    return load_village(ind, edg, village_id, individuals_path, edges_path);
}

void write_individuals_csv(std::ostream& out, const std::vector<VillageNetwork>& villages) {
    bool any_coords = false;
    for (const auto& v : villages)
        for (const auto& ind : v.individuals())
            if (ind.coordinates) any_coords = true;
    out << (any_coords ? "person_id,household_id,village_id,lat,lon\n"
                       : "person_id,household_id,village_id\n");
    std::ostringstream num;
    num.precision(17);
    for (const auto& v : villages)
        for (const auto& ind : v.individuals()) {
            out << ind.person_id << ',' << ind.household_id << ',' << v.village_id();
            if (any_coords) {
                out << ',';
                if (ind.coordinates) {
                    num.str("");
                    num << ind.coordinates->latitude << ',' << ind.coordinates->longitude;
                    out << num.str();
                } else {
                    out << ',';
                }
            }
            out << '\n';
        }
}

void write_edges_csv(std::ostream& out, const std::vector<VillageNetwork>& villages) {
    out << "village_id,person_a,person_b\n";
    for (const auto& v : villages)
        for (const auto& [a, b] : v.edge_list())
            out << v.village_id() << ',' << v.individual(a).person_id << ','
                << v.individual(b).person_id << '\n';
}

} // namespace seednet
