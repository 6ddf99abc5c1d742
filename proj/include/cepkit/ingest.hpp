#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cepkit/panel.hpp"

namespace cepkit {

/// Declares one panel variable. Derived variables are listed in schemas
/// for documentation; ingestion only requires Raw variables in the CSV.
struct VariableDef {
    enum class Construction { Raw, Derived };
    std::string name;
    std::string unit;
    Construction construction = Construction::Raw;
    std::string rule_id;  // derivation identifier, for Derived entries
};

/// Parse a schema file: one `variable NAME UNIT` or
/// `derived NAME UNIT RULE` per line, '#' comments.
std::vector<VariableDef> parse_schema(std::istream& in);
std::vector<VariableDef> load_schema(const std::string& path);

/// Ingest a long-format CSV (`country,period,variable,value`, header
/// mandatory, '.' decimal separator, NA marks an explicitly missing cell)
/// into a balanced panel. Malformed rows are collected and reported with
/// line numbers; unbalanced panels are reported with their missing cells.
PanelDataset ingest_csv(std::istream& in, const std::vector<VariableDef>& schema, Frequency freq);
PanelDataset ingest_csv_file(const std::string& path, const std::vector<VariableDef>& schema,
                             Frequency freq);

/// Serialize a panel back to the long CSV format at full precision.
/// ingest(write(ds)) == ds on balanced datasets.
void write_csv(const PanelDataset& ds, std::ostream& out);

}  // namespace cepkit
