#ifndef TAXMINER_RELATION_H
#define TAXMINER_RELATION_H

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace taxminer {

enum class AttrKind { Continuous, Categorical, Identifier, Text };

std::string attrKindName(AttrKind kind);
AttrKind attrKindFromName(const std::string& name);

struct AttributeSchema {
    std::string name;
    AttrKind kind = AttrKind::Categorical;
    std::vector<std::string> levels;  // categorical only, non-empty, duplicate-free
    bool nullable = true;
};

// One cell: null, a finite number, or a string (categorical label or free text).
class Value {
public:
    Value() : storage_(std::monostate{}) {}

    static Value null() { return Value(); }
    static Value number(double x);
    static Value text(std::string s) { return Value(Storage(std::move(s))); }

    bool isNull() const { return std::holds_alternative<std::monostate>(storage_); }
    bool isNumber() const { return std::holds_alternative<double>(storage_); }
    bool isText() const { return std::holds_alternative<std::string>(storage_); }

    double asNumber() const;
    const std::string& asText() const;

    bool operator==(const Value& other) const { return storage_ == other.storage_; }

private:
    using Storage = std::variant<std::monostate, double, std::string>;
    explicit Value(Storage s) : storage_(std::move(s)) {}
    Storage storage_;
};

using Record = std::vector<Value>;

// Immutable typed table. Construction validates schema and every cell; all
// operations that change data return a new Relation.
class Relation {
public:
    Relation(std::vector<AttributeSchema> schema, std::vector<Record> records);

    const std::vector<AttributeSchema>& schema() const { return schema_; }
    const std::vector<Record>& records() const { return records_; }
    std::size_t rowCount() const { return records_.size(); }
    std::size_t columnCount() const { return schema_.size(); }

    bool hasColumn(const std::string& name) const;
    std::size_t columnIndex(const std::string& name) const;
    const AttributeSchema& attribute(const std::string& name) const;
    const Value& at(std::size_t row, std::size_t col) const { return records_[row][col]; }

    // Columns with kinds the mining algorithms accept (continuous, categorical).
    std::vector<std::size_t> miningColumns() const;

    bool hasNullsIn(const std::vector<std::size_t>& columns) const;

private:
    void validate() const;

    std::vector<AttributeSchema> schema_;
    std::vector<Record> records_;
};

// Appends one categorical/continuous column; all existing cells are shared as-is.
Relation appendAttribute(const Relation& relation, const AttributeSchema& attr,
                         const std::vector<Value>& values);

struct AttributeRange {
    std::string attr;
    double min = 0.0;
    double max = 0.0;
};

// Per-attribute min/max captured by normalization, replayable on later data.
struct ScalerParams {
    std::vector<AttributeRange> ranges;

    const AttributeRange* find(const std::string& attr) const;
};

std::size_t levelIndex(const AttributeSchema& attr, const std::string& label);

}

#endif
