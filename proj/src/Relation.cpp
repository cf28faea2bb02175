#include "taxminer/Relation.h"

#include <cmath>
#include <set>

#include "taxminer/Errors.h"

namespace taxminer {

std::string attrKindName(AttrKind kind) {
    switch (kind) {
        case AttrKind::Continuous: return "continuous";
        case AttrKind::Categorical: return "categorical";
        case AttrKind::Identifier: return "identifier";
        case AttrKind::Text: return "text";
    }
    return "unknown";
}

AttrKind attrKindFromName(const std::string& name) {
    if (name == "continuous") return AttrKind::Continuous;
    if (name == "categorical") return AttrKind::Categorical;
    if (name == "identifier") return AttrKind::Identifier;
    if (name == "text") return AttrKind::Text;
    throw DataError("unknown attribute kind '" + name + "'");
}

Value Value::number(double x) {
    if (!std::isfinite(x)) throw DataError("non-finite number in relation cell");
    return Value(Storage(x));
}

double Value::asNumber() const {
    if (!isNumber()) throw DataError("cell is not numeric");
    return std::get<double>(storage_);
}

const std::string& Value::asText() const {
    if (!isText()) throw DataError("cell is not textual");
    return std::get<std::string>(storage_);
}

Relation::Relation(std::vector<AttributeSchema> schema, std::vector<Record> records)
    : schema_(std::move(schema)), records_(std::move(records)) {
    validate();
}

void Relation::validate() const {
    std::set<std::string> seen;
    for (const auto& attr : schema_) {
        if (attr.name.empty()) throw DataError("attribute with empty name");
        if (!seen.insert(attr.name).second) {
            throw DataError("duplicate attribute name '" + attr.name + "'");
        }
        if (attr.kind == AttrKind::Categorical) {
            if (attr.levels.empty()) {
                throw DataError("categorical attribute '" + attr.name + "' has no levels");
            }
            std::set<std::string> levels(attr.levels.begin(), attr.levels.end());
            if (levels.size() != attr.levels.size()) {
                throw DataError("categorical attribute '" + attr.name + "' has duplicate levels");
            }
        }
    }
    for (std::size_t row = 0; row < records_.size(); ++row) {
        const auto& record = records_[row];
        if (record.size() != schema_.size()) {
            throw DataError("row " + std::to_string(row + 1) + " has " +
                            std::to_string(record.size()) + " cells, expected " +
                            std::to_string(schema_.size()));
        }
        for (std::size_t col = 0; col < schema_.size(); ++col) {
            const auto& attr = schema_[col];
            const auto& value = record[col];
            const std::string where =
                "row " + std::to_string(row + 1) + ", column '" + attr.name + "'";
            if (value.isNull()) {
                if (!attr.nullable) throw DataError("null in non-nullable " + where);
                continue;
            }
            switch (attr.kind) {
                case AttrKind::Continuous:
                    if (!value.isNumber()) throw DataError("non-numeric value in " + where);
                    break;
                case AttrKind::Categorical:
                    if (!value.isText() || levelIndex(attr, value.asText()) == attr.levels.size()) {
                        throw DataError("value outside level list in " + where);
                    }
                    break;
                case AttrKind::Identifier:
                case AttrKind::Text:
                    if (!value.isText()) throw DataError("non-text value in " + where);
                    break;
            }
        }
    }
}

bool Relation::hasColumn(const std::string& name) const {
    for (const auto& attr : schema_) {
        if (attr.name == name) return true;
    }
    return false;
}

std::size_t Relation::columnIndex(const std::string& name) const {
    for (std::size_t i = 0; i < schema_.size(); ++i) {
        if (schema_[i].name == name) return i;
    }
    throw DataError("no attribute named '" + name + "'");
}

const AttributeSchema& Relation::attribute(const std::string& name) const {
    return schema_[columnIndex(name)];
}

std::vector<std::size_t> Relation::miningColumns() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < schema_.size(); ++i) {
        if (schema_[i].kind == AttrKind::Continuous || schema_[i].kind == AttrKind::Categorical) {
            out.push_back(i);
        }
    }
    return out;
}

bool Relation::hasNullsIn(const std::vector<std::size_t>& columns) const {
    for (const auto& record : records_) {
        for (auto col : columns) {
            if (record[col].isNull()) return true;
        }
    }
    return false;
}

Relation appendAttribute(const Relation& relation, const AttributeSchema& attr,
                         const std::vector<Value>& values) {
    if (values.size() != relation.rowCount()) {
        throw DataError("appended column has " + std::to_string(values.size()) +
                        " values for " + std::to_string(relation.rowCount()) + " rows");
    }
    if (relation.hasColumn(attr.name)) {
        throw DataError("attribute '" + attr.name + "' already exists");
    }
    auto schema = relation.schema();
    schema.push_back(attr);
    auto records = relation.records();
    for (std::size_t row = 0; row < records.size(); ++row) {
        records[row].push_back(values[row]);
    }
    return Relation(std::move(schema), std::move(records));
}

const AttributeRange* ScalerParams::find(const std::string& attr) const {
    for (const auto& range : ranges) {
        if (range.attr == attr) return &range;
    }
    return nullptr;
}

std::size_t levelIndex(const AttributeSchema& attr, const std::string& label) {
    for (std::size_t i = 0; i < attr.levels.size(); ++i) {
        if (attr.levels[i] == label) return i;
    }
    return attr.levels.size();
}

}
