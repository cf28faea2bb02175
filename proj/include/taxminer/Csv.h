#ifndef TAXMINER_CSV_H
#define TAXMINER_CSV_H

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "taxminer/Relation.h"

namespace taxminer {

// Canonical float form used in every text artifact: 12 significant digits,
// shortest representation, no exponent for plain integers.
std::string formatNumber(double x);

// CSV contract: UTF-8, comma delimiter, double-quote escaping, LF endings,
// header row matching schema order. Empty fields and "?" read as null; null
// writes as the empty field.
Relation loadCsv(std::istream& in, const std::vector<AttributeSchema>& schema);
Relation loadCsvFile(const std::string& path, const std::vector<AttributeSchema>& schema);
std::string writeCsv(const Relation& relation);
void writeCsvFile(const Relation& relation, const std::string& path);

nlohmann::json schemaToJson(const std::vector<AttributeSchema>& schema);
std::vector<AttributeSchema> schemaFromJson(const nlohmann::json& doc);
std::vector<AttributeSchema> loadSchemaFile(const std::string& path);
void writeSchemaFile(const std::vector<AttributeSchema>& schema, const std::string& path);

// Pretty-printed with sorted keys so artifact diffs stay stable.
void writeJsonFile(const nlohmann::json& doc, const std::string& path);
nlohmann::json loadJsonFile(const std::string& path);

}

#endif
