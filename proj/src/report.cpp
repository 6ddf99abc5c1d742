#include "cepkit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cepkit/errors.hpp"
#include "cepkit/util.hpp"

namespace cepkit {

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return std::string(buf);
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += "\"";
    return out;
}

}  // namespace

std::string Cell::render() const {
    switch (kind) {
        case Kind::Empty: return "";
        case Kind::Text: return text;
        case Kind::Price: return fmt("%.3f", value);
        case Kind::Share: return fmt("%.0f%%", value * 100.0);
        case Kind::Level: return fmt("%.0f", value);
        case Kind::Rate: return fmt("%.1f%%", value * 100.0);
        case Kind::PValue: return fmt("%.4f", value);
        case Kind::Raw: return fmt("%.6g", value);
    }
    return "";
}

std::string Table::to_text(char mark) const {
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> header{""};
    for (const auto& c : columns) header.push_back(c);
    grid.push_back(header);
    for (const auto& row : rows) {
        std::vector<std::string> line{row.label};
        for (std::size_t c = 0; c < columns.size(); ++c) {
            std::string s;
            if (c < row.cells.size()) {
                s = row.cells[c].render();
                if (row.cells[c].marked && !s.empty()) s += mark;
            }
            line.push_back(std::move(s));
        }
        grid.push_back(std::move(line));
    }
    std::vector<std::size_t> widths(columns.size() + 1, 0);
    for (const auto& line : grid)
        for (std::size_t c = 0; c < line.size(); ++c)
            widths[c] = std::max(widths[c], line[c].size());

    std::ostringstream out;
    out << title << "\n";
    for (const auto& line : grid) {
        for (std::size_t c = 0; c < line.size(); ++c) {
            if (c) out << "  ";
            // labels left-aligned, numbers right-aligned
            if (c == 0)
                out << line[c] << std::string(widths[c] - line[c].size(), ' ');
            else
                out << std::string(widths[c] - line[c].size(), ' ') << line[c];
        }
        out << "\n";
    }
    return out.str();
}

std::string Table::to_csv() const {
    std::ostringstream out;
    out << "table,row,col,value,marked\n";
    for (const auto& row : rows)
        for (std::size_t c = 0; c < columns.size() && c < row.cells.size(); ++c) {
            const Cell& cell = row.cells[c];
            if (cell.kind == Cell::Kind::Empty) continue;
            out << csv_quote(name) << ',' << csv_quote(row.label) << ',' << csv_quote(columns[c])
                << ',';
            if (cell.kind == Cell::Kind::Text)
                out << csv_quote(cell.text);
            else
                out << format_full(cell.value);
            out << ',' << (cell.marked ? 1 : 0) << '\n';
        }
    return out.str();
}

std::map<std::pair<std::string, std::string>, double> parse_table_csv(const std::string& csv) {
    std::map<std::pair<std::string, std::string>, double> out;
    std::istringstream in(csv);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            continue;
        }
        std::vector<std::string> fields;
        std::string cur;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    cur += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        fields.push_back(cur);
        if (fields.size() != 5) continue;
        try {
            std::size_t pos = 0;
            double v = std::stod(fields[3], &pos);
            if (pos == fields[3].size()) out[{fields[1], fields[2]}] = v;
        } catch (...) {
            // text cell
        }
    }
    return out;
}

Table build_regression_table(const std::string& name, const RegressionTableInputs& in,
                             Cell::Kind coef_kind) {
    if (!in.fit) throw Error::input("IncompleteResults", "no fit supplied for " + name);
    const FitResult& fit = *in.fit;
    const std::size_t J = fit.countries.size();

    Table t;
    t.name = name;
    t.title = name == "T2" ? "Household retail prices: government wedge regression"
                           : "Determinants of wholesale electricity prices";
    t.columns = fit.countries;
    t.columns.push_back("WTp");

    auto coef_cell = [&](double v) {
        Cell c = Cell::price(v);
        c.kind = coef_kind;
        return c;
    };

    for (const auto& [rname, scope] : fit.spec.regressors) {
        Table::Row row{rname, {}};
        if (scope == SlopeScope::PerCountry) {
            for (const auto& c : fit.countries) row.cells.push_back(coef_cell(fit.coefficient(rname, c)));
            auto w = in.wald.find(rname);
            if (w != in.wald.end())
                row.cells.push_back(Cell::pvalue(w->second.p_value));
        } else {
            row.cells.push_back(coef_cell(fit.coefficient(rname)));
        }
        t.rows.push_back(std::move(row));
    }
    for (const auto& dname : fit.spec.dummies) {
        Table::Row row{dname, {coef_cell(fit.coefficient(dname))}};
        t.rows.push_back(std::move(row));
    }
    for (const auto& key : fit.names) {
        if (key.regressor.rfind("ar_", 0) == 0 || key.regressor.rfind("ma_", 0) == 0) {
            if (!key.country.empty()) continue;  // per-country ARMA listed in fit.json only
            std::string lag = key.regressor.substr(3);
            std::string label = (key.regressor[0] == 'a' ? "AR(" : "MA(") + lag + ")";
            t.rows.push_back({label, {Cell::raw(fit.coefficient(key.regressor))}});
        }
    }
    if (fit.spec.seasonal_effects) {
        Table::Row row{"Fixed S Effects", {}};
        for (std::size_t j = 0; j < J; ++j) row.cells.push_back(Cell::of_text("YES"));
        t.rows.push_back(std::move(row));
    }
    t.rows.push_back({"Adjusted R2", {Cell::raw(fit.r2_adjusted)}});
    t.rows.push_back({"DW Stat", {Cell::raw(fit.dw)}});
    t.rows.push_back({"Sample size", {Cell::level(static_cast<double>(fit.n_obs))}});
    if (in.vif) {
        Table::Row names_row{"Variable", {}};
        Table::Row vif_row{"VIF", {}};
        for (const auto& [vname, v] : in.vif->values) {
            names_row.cells.push_back(Cell::of_text(vname));
            vif_row.cells.push_back(Cell::raw(v));
        }
        t.rows.push_back(std::move(names_row));
        t.rows.push_back(std::move(vif_row));
    }
    if (in.hausman) {
        Table::Row row{"Hausman Test", {Cell::raw(in.hausman->statistic)}};
        row.cells.resize(J, Cell::empty());
        row.cells.push_back(Cell::pvalue(in.hausman->p_value));
        t.rows.push_back(std::move(row));
    }
    return t;
}

namespace {

std::vector<std::string> common_countries(const EnsembleByCountry& a, const EnsembleByCountry& b,
                                          const std::string& what) {
    std::vector<std::string> keys;
    for (const auto& [c, _] : a) keys.push_back(c);
    for (const auto& c : keys)
        if (b.find(c) == b.end())
            throw Error::input("IncompleteResults", what + ": missing 2030 ensemble for " + c);
    for (const auto& [c, _] : b)
        if (a.find(c) == a.end())
            throw Error::input("IncompleteResults", what + ": missing 2020 ensemble for " + c);
    return keys;
}

}  // namespace

Table build_t3(const TargetConfig& cfg, const EnsembleByCountry& e2020,
               const EnsembleByCountry& e2030) {
    auto countries = common_countries(e2020, e2030, "T3");
    Table t;
    t.name = "T3";
    t.title = "GHG emissions in 2020 and 2030 (trend model, thousand tonnes)";
    t.columns = countries;

    Table::Row base{"GHG emissions 1990", {}}, t20{"Target 2020", {}}, q1_20{"Q(1%,2020)", {}},
        q50_20{"Q(50%,2020)", {}}, t30{"Target 2030", {}}, q1_30{"Q(1%,2030)", {}},
        q50_30{"Q(50%,2030)", {}};
    for (const auto& c : countries) {
        double b = cfg.at(c).ghg_1990;
        double tgt20 = ghg_target(b, Horizon::Y2020);
        double tgt30 = ghg_target(b, Horizon::Y2030);
        auto q20 = quantiles(e2020.at(c), {0.01, 0.5});
        auto q30 = quantiles(e2030.at(c), {0.01, 0.5});
        bool m20 = q20.at(0.01) > tgt20;
        bool m30 = q30.at(0.01) > tgt30;
        base.cells.push_back(Cell::level(b));
        t20.cells.push_back(Cell::level(tgt20));
        t30.cells.push_back(Cell::level(tgt30));
        Cell c1 = Cell::level(q20.at(0.01)), c2 = Cell::level(q20.at(0.5));
        c1.marked = c2.marked = m20;
        q1_20.cells.push_back(c1);
        q50_20.cells.push_back(c2);
        Cell d1 = Cell::level(q30.at(0.01)), d2 = Cell::level(q30.at(0.5));
        d1.marked = d2.marked = m30;
        q1_30.cells.push_back(d1);
        q50_30.cells.push_back(d2);
    }
    t.rows = {base, t20, q1_20, q50_20, t30, q1_30, q50_30};
    return t;
}

Table build_t4(const GrowthTable& growth) {
    Table t;
    t.name = "T4";
    t.title = "Average yearly growth rates";
    for (const auto& [c, _] : growth.rates) t.columns.push_back(c);
    t.columns.push_back("Total");
    for (const auto& v : growth.variables) {
        Table::Row row{v, {}};
        for (const auto& [c, rates] : growth.rates) row.cells.push_back(Cell::rate(rates.at(v)));
        row.cells.push_back(Cell::rate(growth.total.at(v)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table build_t5(const TargetConfig& cfg,
               const std::map<std::string, std::pair<double, int>>& start_levels,
               const std::vector<ScenarioPanel>& panels) {
    if (panels.empty()) throw Error::input("IncompleteResults", "T5: no scenario panels");
    auto countries = common_countries(panels.front().e2020, panels.front().e2030, "T5");
    Table t;
    t.name = "T5";
    t.title = "GHG emissions in 2020 and 2030 under scenarios (growth model, thousand tonnes)";
    t.columns = countries;

    int start_year = 0;
    Table::Row base{"GHG in 1990", {}}, start{"GHG at start", {}}, t20{"Target 2020", {}},
        t30{"Target 2030", {}};
    for (const auto& c : countries) {
        auto it = start_levels.find(c);
        if (it == start_levels.end())
            throw Error::input("IncompleteResults", "T5: no start level for " + c);
        start_year = it->second.second;
        base.cells.push_back(Cell::level(cfg.at(c).ghg_1990));
        start.cells.push_back(Cell::level(it->second.first));
        t20.cells.push_back(Cell::level(ghg_target(cfg.at(c).ghg_1990, Horizon::Y2020)));
        t30.cells.push_back(Cell::level(ghg_target(cfg.at(c).ghg_1990, Horizon::Y2030)));
    }
    start.label = "GHG in " + std::to_string(start_year);
    t.rows = {base, start, t20, t30};

    for (const auto& panel : panels) {
        common_countries(panel.e2020, panel.e2030, "T5 panel " + panel.name);
        Table::Row q1_20{"Panel " + panel.name + " Q(1%,2020)", {}},
            q50_20{"Panel " + panel.name + " Q(50%,2020)", {}},
            q1_30{"Panel " + panel.name + " Q(1%,2030)", {}},
            q50_30{"Panel " + panel.name + " Q(50%,2030)", {}};
        for (const auto& c : countries) {
            double tgt20 = ghg_target(cfg.at(c).ghg_1990, Horizon::Y2020);
            double tgt30 = ghg_target(cfg.at(c).ghg_1990, Horizon::Y2030);
            auto q20 = quantiles(panel.e2020.at(c), {0.01, 0.5});
            auto q30 = quantiles(panel.e2030.at(c), {0.01, 0.5});
            Cell a = Cell::level(q20.at(0.01)), b = Cell::level(q20.at(0.5));
            a.marked = b.marked = q20.at(0.01) > tgt20;
            Cell d = Cell::level(q30.at(0.01)), e = Cell::level(q30.at(0.5));
            d.marked = e.marked = q30.at(0.01) > tgt30;
            q1_20.cells.push_back(a);
            q50_20.cells.push_back(b);
            q1_30.cells.push_back(d);
            q50_30.cells.push_back(e);
        }
        t.rows.push_back(std::move(q1_20));
        t.rows.push_back(std::move(q50_20));
        t.rows.push_back(std::move(q1_30));
        t.rows.push_back(std::move(q50_30));
    }
    return t;
}

Table build_t6(const TargetConfig& cfg, const EnsembleByCountry& e2020,
               const EnsembleByCountry& e2030) {
    auto countries = common_countries(e2020, e2030, "T6");
    Table t;
    t.name = "T6";
    t.title = "National RES share targets for 2020 and 2030";
    t.columns = countries;

    auto horizon_rows = [&](Horizon h, const EnsembleByCountry& e) {
        std::string y = std::to_string(static_cast<int>(h));
        Table::Row tgt{"Target " + y, {}}, q1{"Q(1%," + y + ")", {}}, q50{"Q(50%," + y + ")", {}},
            q99{"Q(99%," + y + ")", {}};
        for (const auto& c : countries) {
            double target = res_target(cfg, c, h);
            auto q = quantiles(e.at(c), {0.01, 0.5, 0.99});
            bool miss = q.at(0.99) < target;
            tgt.cells.push_back(Cell::share(target));
            Cell a = Cell::share(q.at(0.01)), b = Cell::share(q.at(0.5)), d = Cell::share(q.at(0.99));
            a.marked = b.marked = d.marked = miss;
            q1.cells.push_back(a);
            q50.cells.push_back(b);
            q99.cells.push_back(d);
        }
        t.rows.push_back(std::move(tgt));
        t.rows.push_back(std::move(q1));
        t.rows.push_back(std::move(q50));
        t.rows.push_back(std::move(q99));
    };
    horizon_rows(Horizon::Y2020, e2020);
    horizon_rows(Horizon::Y2030, e2030);
    return t;
}

Table build_t7(const TargetConfig& cfg, const EnsembleByCountry& e2020,
               const EnsembleByCountry& e2030) {
    auto countries = common_countries(e2020, e2030, "T7");
    Table t;
    t.name = "T7";
    t.title = "Projections and targets of electricity consumption in 2020 and 2030 (GWh)";
    t.columns = countries;

    Table::Row gic{"Gross Inland Consumption 2010", {}};
    for (const auto& c : countries) gic.cells.push_back(Cell::level(cfg.at(c).gic_2010));
    t.rows.push_back(std::move(gic));

    auto horizon_rows = [&](Horizon h, const EnsembleByCountry& e) {
        std::string y = std::to_string(static_cast<int>(h));
        Table::Row proj{"Projection " + y, {}}, tgt{"Target " + y, {}}, q1{"Q(1%," + y + ")", {}},
            q50{"Q(50%," + y + ")", {}};
        for (const auto& c : countries) {
            auto ct = consumption_projection_and_target(cfg.at(c).gic_2010, h);
            auto q = quantiles(e.at(c), {0.01, 0.5});
            bool miss = q.at(0.01) > ct.target;
            proj.cells.push_back(Cell::level(ct.projection));
            tgt.cells.push_back(Cell::level(ct.target));
            Cell a = Cell::level(q.at(0.01)), b = Cell::level(q.at(0.5));
            a.marked = b.marked = miss;
            q1.cells.push_back(a);
            q50.cells.push_back(b);
        }
        t.rows.push_back(std::move(proj));
        t.rows.push_back(std::move(tgt));
        t.rows.push_back(std::move(q1));
        t.rows.push_back(std::move(q50));
    };
    horizon_rows(Horizon::Y2020, e2020);
    horizon_rows(Horizon::Y2030, e2030);
    return t;
}

Table build_aic_table(
    const std::map<std::string, std::map<std::string, ModelSelection>>& by_var_country) {
    Table t;
    t.name = "AIC";
    t.title = "Model comparison by AIC";
    std::vector<std::string> countries;
    for (const auto& [_, by_country] : by_var_country)
        for (const auto& [c, __] : by_country)
            if (std::find(countries.begin(), countries.end(), c) == countries.end())
                countries.push_back(c);
    std::sort(countries.begin(), countries.end());
    t.columns = countries;

    for (const auto& [var, by_country] : by_var_country) {
        std::vector<std::string> model_names;
        for (const auto& [_, sel] : by_country)
            for (const auto& row : sel.table)
                if (std::find(model_names.begin(), model_names.end(), row.name) == model_names.end())
                    model_names.push_back(row.name);
        for (const auto& mname : model_names) {
            Table::Row row{var + " AIC " + mname, {}};
            for (const auto& c : countries) {
                auto it = by_country.find(c);
                Cell cell = Cell::empty();
                if (it != by_country.end())
                    for (const auto& r : it->second.table)
                        if (r.name == mname) cell = Cell::raw(r.aic);
                row.cells.push_back(cell);
            }
            t.rows.push_back(std::move(row));
        }
        Table::Row chosen{var + " chosen", {}};
        for (const auto& c : countries) {
            auto it = by_country.find(c);
            if (it == by_country.end()) {
                chosen.cells.push_back(Cell::empty());
            } else {
                chosen.cells.push_back(Cell::of_text(it->second.table[it->second.chosen].name));
            }
        }
        t.rows.push_back(std::move(chosen));
    }
    return t;
}

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error::input("MalformedRow", "cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.good()) throw Error::input("MalformedRow", "short write to '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::string digest_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error::input("MalformedRow", "cannot read '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return fnv1a64_hex(buf.str());
}

ArtifactWriter::ArtifactWriter(std::filesystem::path out_dir) : out_dir_(std::move(out_dir)) {}

void ArtifactWriter::add(const std::string& name, std::string content) {
    artifacts_.emplace_back(name, std::move(content));
}

bool ArtifactWriter::has(const std::string& name) const {
    for (const auto& [n, _] : artifacts_)
        if (n == name) return true;
    return false;
}

nlohmann::json ArtifactWriter::commit(const std::string& command, const nlohmann::json& config,
                                      std::uint64_t master_seed,
                                      const std::map<std::string, std::string>& inputs) {
    std::filesystem::create_directories(out_dir_);
    nlohmann::json manifest;
    manifest["command"] = command;
    manifest["config"] = config;
    manifest["config_digest"] = fnv1a64_hex(config.dump());
    manifest["master_seed"] = master_seed;
    for (const auto& [label, path] : inputs) manifest["inputs"][label] = {{"path", path}, {"digest", digest_file(path)}};
    for (const auto& [name, content] : artifacts_) {
        atomic_write_file(out_dir_ / name, content);
        manifest["outputs"][name] = fnv1a64_hex(content);
    }
    atomic_write_file(out_dir_ / "manifest.json", manifest.dump(2) + "\n");
    return manifest;
}

}  // namespace cepkit
