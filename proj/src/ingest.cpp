#include "cepkit/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cepkit/errors.hpp"
#include "cepkit/util.hpp"

namespace cepkit {

namespace {

std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

bool is_na(std::string_view s) { return s == "NA" || s == "na" || s == "NaN" || s == "nan"; }

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error::input("MalformedRow", "cannot open file '" + path + "'");
    return in;
}

}  // namespace

std::vector<VariableDef> parse_schema(std::istream& in) {
    std::vector<VariableDef> defs;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        std::istringstream tokens{std::string(s)};
        std::string kind, name, unit, rule;
        tokens >> kind >> name >> unit;
        VariableDef def;
        if (kind == "variable") {
            def.construction = VariableDef::Construction::Raw;
        } else if (kind == "derived") {
            def.construction = VariableDef::Construction::Derived;
            tokens >> rule;
        } else {
            throw Error::input("MalformedRow", "schema line " + std::to_string(lineno) +
                                                   ": expected 'variable' or 'derived'");
        }
        if (name.empty() || unit.empty())
            throw Error::input("MalformedRow",
                               "schema line " + std::to_string(lineno) + ": missing name or unit");
        if (!seen.insert(name).second)
            throw Error::input("MalformedRow",
                               "schema line " + std::to_string(lineno) + ": duplicate variable '" + name + "'");
        def.name = name;
        def.unit = unit;
        def.rule_id = rule;
        defs.push_back(std::move(def));
    }
    return defs;
}

std::vector<VariableDef> load_schema(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_schema(in);
}

PanelDataset ingest_csv(std::istream& in, const std::vector<VariableDef>& schema, Frequency freq) {
    std::map<std::string, const VariableDef*> raw_vars;
    for (const auto& def : schema)
        if (def.construction == VariableDef::Construction::Raw) raw_vars[def.name] = &def;

    std::string line;
    int lineno = 0;
    bool saw_header = false;
    std::vector<std::string> bad_rows;

    struct Cell {
        double value;
        int lineno;
    };
    // (variable, country, ordinal) -> cell
    std::map<std::string, std::map<std::string, std::map<long, Cell>>> cells;
    std::set<std::string> countries;
    std::map<long, Period> periods;

    auto report_bad = [&](const std::string& why) {
        bad_rows.push_back("line " + std::to_string(lineno) + ": " + why);
    };

    while (std::getline(in, line)) {
        ++lineno;
        auto s = trim(line);
        if (s.empty()) continue;
        if (!saw_header) {
            auto fields = split_csv_line(s);
            if (fields.size() != 4 || fields[0] != "country" || fields[1] != "period" ||
                fields[2] != "variable" || fields[3] != "value")
                throw Error::input("MalformedRow",
                                   "line 1: expected header 'country,period,variable,value'");
            saw_header = true;
            continue;
        }
        auto fields = split_csv_line(s);
        if (fields.size() != 4) {
            report_bad("expected 4 fields, got " + std::to_string(fields.size()));
            continue;
        }
        std::string country(fields[0]);
        std::string variable(fields[2]);
        if (country.empty()) {
            report_bad("empty country code");
            continue;
        }
        if (raw_vars.find(variable) == raw_vars.end())
            throw Error::input("UnknownVariable", "line " + std::to_string(lineno) +
                                                      ": variable '" + variable +
                                                      "' not in schema");
        Period p;
        try {
            p = Period::parse(fields[1], freq);
        } catch (const Error& e) {
            report_bad(e.what());
            continue;
        }
        double value = PanelDataset::missing();
        if (!is_na(fields[3])) {
            auto vs = fields[3];
            auto [ptr, ec] = std::from_chars(vs.data(), vs.data() + vs.size(), value);
            if (ec != std::errc() || ptr != vs.data() + vs.size()) {
                report_bad("cannot parse value '" + std::string(vs) + "'");
                continue;
            }
        }
        auto& slot = cells[variable][country];
        auto [it, inserted] = slot.emplace(p.ordinal(), Cell{value, lineno});
        if (!inserted)
            throw Error::input("MalformedRow",
                               "line " + std::to_string(lineno) + ": duplicate cell (" + country +
                                   ", " + p.label() + ", " + variable + "), first seen at line " +
                                   std::to_string(it->second.lineno));
        countries.insert(country);
        periods.emplace(p.ordinal(), p);
    }

    if (!bad_rows.empty()) {
        std::string msg = std::to_string(bad_rows.size()) + " malformed row(s); first: " + bad_rows.front();
        if (bad_rows.size() > 1) msg += " ... last: " + bad_rows.back();
        throw Error::input("MalformedRow", msg);
    }
    if (countries.empty() || periods.empty())
        throw Error::input("UnbalancedPanel",
                           "empty dataset: 0 countries, 0 periods, 0 observations");

    std::vector<std::string> country_list(countries.begin(), countries.end());
    std::vector<Period> time_index;
    time_index.reserve(periods.size());
    for (const auto& [_, p] : periods) time_index.push_back(p);

    PanelDataset ds(country_list, time_index);

    std::vector<std::string> missing_cells;
    for (const auto& [name, def] : raw_vars) {
        Eigen::MatrixXd m(ds.n_periods(), ds.n_countries());
        auto var_it = cells.find(name);
        for (int j = 0; j < ds.n_countries(); ++j) {
            const std::map<long, Cell>* per_country = nullptr;
            if (var_it != cells.end()) {
                auto c_it = var_it->second.find(country_list[static_cast<std::size_t>(j)]);
                if (c_it != var_it->second.end()) per_country = &c_it->second;
            }
            for (int t = 0; t < ds.n_periods(); ++t) {
                const Period& p = time_index[static_cast<std::size_t>(t)];
                const Cell* cell = nullptr;
                if (per_country) {
                    auto it = per_country->find(p.ordinal());
                    if (it != per_country->end()) cell = &it->second;
                }
                if (!cell) {
                    if (missing_cells.size() < 20)
                        missing_cells.push_back("(" + country_list[static_cast<std::size_t>(j)] +
                                                ", " + p.label() + ", " + name + ")");
                    m(t, j) = PanelDataset::missing();
                } else {
                    m(t, j) = cell->value;
                }
            }
        }
        ds = ds.with_variable(name, def->unit, std::move(m));
    }

    if (!missing_cells.empty()) {
        std::string msg = "missing cells: ";
        for (std::size_t i = 0; i < missing_cells.size(); ++i) {
            if (i) msg += ", ";
            msg += missing_cells[i];
        }
        if (missing_cells.size() == 20) msg += ", ...";
        throw Error::input("UnbalancedPanel", msg);
    }
    return ds;
}

PanelDataset ingest_csv_file(const std::string& path, const std::vector<VariableDef>& schema,
                             Frequency freq) {
    auto in = open_or_throw(path);
    return ingest_csv(in, schema, freq);
}

void write_csv(const PanelDataset& ds, std::ostream& out) {
    out << "country,period,variable,value\n";
    for (const auto& name : ds.variable_names()) {
        const auto& m = ds.values(name);
        for (int j = 0; j < ds.n_countries(); ++j)
            for (int t = 0; t < ds.n_periods(); ++t) {
                out << ds.countries()[static_cast<std::size_t>(j)] << ','
                    << ds.time_index()[static_cast<std::size_t>(t)].label() << ',' << name << ',';
                double v = m(t, j);
                if (PanelDataset::is_missing(v))
                    out << "NA";
                else
                    out << format_full(v);
                out << '\n';
            }
    }
}

}  // namespace cepkit
