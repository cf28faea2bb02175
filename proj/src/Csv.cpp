#include "taxminer/Csv.h"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "taxminer/Errors.h"

namespace taxminer {

namespace {

bool needsQuoting(const std::string& field) {
    return field.find_first_of(",\"\n\r") != std::string::npos;
}

std::string quoteField(const std::string& field) {
    if (!needsQuoting(field)) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Splits the full text into rows of fields; quoted fields may contain
// delimiters and newlines.
std::vector<std::vector<std::string>> parseCsv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool inQuotes = false;
    bool rowStarted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (inQuotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    inQuotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                inQuotes = true;
                rowStarted = true;
                break;
            case ',':
                row.push_back(std::move(field));
                field.clear();
                rowStarted = true;
                break;
            case '\r':
                break;
            case '\n':
                if (rowStarted || !field.empty()) {
                    row.push_back(std::move(field));
                    field.clear();
                    rows.push_back(std::move(row));
                    row.clear();
                    rowStarted = false;
                }
                break;
            default:
                field += c;
                rowStarted = true;
                break;
        }
    }
    if (inQuotes) throw DataError("unterminated quoted field at end of input");
    if (rowStarted || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

double parseNumber(const std::string& field, std::size_t row, const std::string& column) {
    const char* begin = field.c_str();
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE) {
        throw DataError("cannot parse '" + field + "' as a number in row " +
                        std::to_string(row) + ", column '" + column + "'");
    }
    return value;
}

}

std::string formatNumber(double x) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", x);
    return buffer;
}

Relation loadCsv(std::istream& in, const std::vector<AttributeSchema>& schema) {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const auto rows = parseCsv(buffer.str());
    if (rows.empty()) throw DataError("CSV input has no header row");

    const auto& header = rows.front();
    if (header.size() != schema.size()) {
        throw DataError("header has " + std::to_string(header.size()) +
                        " columns, schema expects " + std::to_string(schema.size()));
    }
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (header[i] != schema[i].name) {
            throw DataError("header mismatch at column " + std::to_string(i + 1) + ": got '" +
                            header[i] + "', expected '" + schema[i].name + "'");
        }
    }

    std::vector<Record> records;
    records.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& cells = rows[r];
        if (cells.size() != schema.size()) {
            throw DataError("row " + std::to_string(r) + " has " + std::to_string(cells.size()) +
                            " fields, expected " + std::to_string(schema.size()));
        }
        Record record;
        record.reserve(schema.size());
        for (std::size_t c = 0; c < schema.size(); ++c) {
            const auto& field = cells[c];
            if (field.empty() || field == "?") {
                record.push_back(Value::null());
            } else if (schema[c].kind == AttrKind::Continuous) {
                record.push_back(Value::number(parseNumber(field, r, schema[c].name)));
            } else {
                record.push_back(Value::text(field));
            }
        }
        records.push_back(std::move(record));
    }
    return Relation(schema, std::move(records));
}

Relation loadCsvFile(const std::string& path, const std::vector<AttributeSchema>& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    return loadCsv(in, schema);
}

std::string writeCsv(const Relation& relation) {
    std::string out;
    const auto& schema = relation.schema();
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (i > 0) out += ',';
        out += quoteField(schema[i].name);
    }
    out += '\n';
    for (const auto& record : relation.records()) {
        for (std::size_t i = 0; i < record.size(); ++i) {
            if (i > 0) out += ',';
            const auto& value = record[i];
            if (value.isNull()) continue;
            out += value.isNumber() ? formatNumber(value.asNumber()) : quoteField(value.asText());
        }
        out += '\n';
    }
    return out;
}

void writeCsvFile(const Relation& relation, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << writeCsv(relation);
}

nlohmann::json schemaToJson(const std::vector<AttributeSchema>& schema) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& attr : schema) {
        nlohmann::json entry;
        entry["name"] = attr.name;
        entry["kind"] = attrKindName(attr.kind);
        entry["nullable"] = attr.nullable;
        if (attr.kind == AttrKind::Categorical) entry["levels"] = attr.levels;
        doc.push_back(std::move(entry));
    }
    return doc;
}

std::vector<AttributeSchema> schemaFromJson(const nlohmann::json& doc) {
    if (!doc.is_array()) throw DataError("schema document must be a JSON array");
    std::vector<AttributeSchema> schema;
    for (const auto& entry : doc) {
        AttributeSchema attr;
        if (!entry.contains("name") || !entry.contains("kind")) {
            throw DataError("schema entry missing 'name' or 'kind'");
        }
        attr.name = entry.at("name").get<std::string>();
        attr.kind = attrKindFromName(entry.at("kind").get<std::string>());
        attr.nullable = entry.value("nullable", true);
        if (attr.kind == AttrKind::Categorical) {
            if (!entry.contains("levels")) {
                throw DataError("categorical schema entry '" + attr.name + "' missing 'levels'");
            }
            attr.levels = entry.at("levels").get<std::vector<std::string>>();
        }
        schema.push_back(std::move(attr));
    }
    return schema;
}

std::vector<AttributeSchema> loadSchemaFile(const std::string& path) {
    return schemaFromJson(loadJsonFile(path));
}

void writeSchemaFile(const std::vector<AttributeSchema>& schema, const std::string& path) {
    writeJsonFile(schemaToJson(schema), path);
}

void writeJsonFile(const nlohmann::json& doc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << doc.dump(2) << '\n';
}

nlohmann::json loadJsonFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid JSON in '" + path + "': " + e.what());
    }
    return doc;
}

}
