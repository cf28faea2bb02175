#include "taxminer/Prepare.h"

#include <algorithm>

#include "taxminer/Csv.h"
#include "taxminer/Errors.h"

namespace taxminer {

namespace {

double medianOf(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size();
    if (m % 2 == 1) return values[m / 2];
    return (values[m / 2 - 1] + values[m / 2]) / 2.0;
}

Value imputedValue(const Relation& relation, std::size_t col) {
    const auto& attr = relation.schema()[col];
    if (attr.kind == AttrKind::Continuous) {
        std::vector<double> values;
        for (const auto& record : relation.records()) {
            if (!record[col].isNull()) values.push_back(record[col].asNumber());
        }
        if (values.empty()) {
            throw DataError("column '" + attr.name + "' is entirely null, cannot impute");
        }
        return Value::number(medianOf(std::move(values)));
    }
    // Mode; ties resolve to the earliest level in the schema list.
    std::vector<std::size_t> counts(attr.levels.size(), 0);
    for (const auto& record : relation.records()) {
        if (!record[col].isNull()) ++counts[levelIndex(attr, record[col].asText())];
    }
    std::size_t best = counts.size();
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0 && (best == counts.size() || counts[i] > counts[best])) best = i;
    }
    if (best == counts.size()) {
        throw DataError("column '" + attr.name + "' is entirely null, cannot impute");
    }
    return Value::text(attr.levels[best]);
}

std::vector<double> binEdges(const std::vector<double>& sorted, std::size_t bins, BinMethod method) {
    const double lo = sorted.front();
    const double hi = sorted.back();
    std::vector<double> edges{lo};
    if (lo < hi) {
        if (method == BinMethod::EqualWidth) {
            for (std::size_t i = 1; i < bins; ++i) {
                edges.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins));
            }
        } else {
            const auto m = sorted.size();
            for (std::size_t i = 1; i < bins; ++i) {
                const auto rank = m * i / bins;
                if (rank == 0 || rank >= m) continue;
                if (sorted[rank - 1] < sorted[rank]) {
                    edges.push_back((sorted[rank - 1] + sorted[rank]) / 2.0);
                }
            }
        }
    }
    edges.push_back(hi);
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    if (edges.size() == 1) edges.push_back(edges.front());
    return edges;
}

std::size_t binOf(double x, const std::vector<double>& edges) {
    const std::size_t binCount = edges.size() - 1;
    for (std::size_t b = 0; b + 1 < binCount; ++b) {
        if (x >= edges[b] && x < edges[b + 1]) return b;
    }
    return binCount - 1;
}

}

NullPolicy nullPolicyFromName(const std::string& name) {
    if (name == "drop") return NullPolicy::DropRows;
    if (name == "impute") return NullPolicy::Impute;
    throw UsageError("unknown null policy '" + name + "' (expected drop or impute)");
}

BinMethod binMethodFromName(const std::string& name) {
    if (name == "width") return BinMethod::EqualWidth;
    if (name == "frequency") return BinMethod::EqualFrequency;
    throw UsageError("unknown bin method '" + name + "' (expected width or frequency)");
}

Relation prepare(const Relation& relation, NullPolicy policy) {
    const auto mining = relation.miningColumns();
    if (policy == NullPolicy::DropRows) {
        std::vector<Record> kept;
        for (const auto& record : relation.records()) {
            const bool hasNull = std::any_of(mining.begin(), mining.end(),
                                             [&](std::size_t col) { return record[col].isNull(); });
            if (!hasNull) kept.push_back(record);
        }
        return Relation(relation.schema(), std::move(kept));
    }
    std::vector<std::pair<std::size_t, Value>> fills;
    for (auto col : mining) {
        const bool hasNull = std::any_of(relation.records().begin(), relation.records().end(),
                                         [&](const Record& r) { return r[col].isNull(); });
        if (hasNull) fills.emplace_back(col, imputedValue(relation, col));
    }
    auto records = relation.records();
    for (auto& record : records) {
        for (const auto& [col, fill] : fills) {
            if (record[col].isNull()) record[col] = fill;
        }
    }
    return Relation(relation.schema(), std::move(records));
}

DiscretizeResult discretize(const Relation& relation, const std::string& attr,
                            std::size_t bins, BinMethod method) {
    if (bins < 2) throw UsageError("discretize needs at least 2 bins");
    const auto col = relation.columnIndex(attr);
    if (relation.schema()[col].kind != AttrKind::Continuous) {
        throw DataError("attribute '" + attr + "' is not continuous");
    }
    std::vector<double> sorted;
    for (const auto& record : relation.records()) {
        if (!record[col].isNull()) sorted.push_back(record[col].asNumber());
    }
    if (sorted.empty()) throw DataError("attribute '" + attr + "' has no values to discretize");
    std::sort(sorted.begin(), sorted.end());

    const auto edges = binEdges(sorted, bins, method);
    const std::size_t binCount = edges.size() - 1;
    std::vector<std::string> labels;
    for (std::size_t b = 0; b < binCount; ++b) {
        labels.push_back("[" + formatNumber(edges[b]) + "," + formatNumber(edges[b + 1]) +
                         (b + 1 == binCount ? "]" : ")"));
    }

    auto schema = relation.schema();
    schema[col].kind = AttrKind::Categorical;
    schema[col].levels = labels;
    auto records = relation.records();
    for (auto& record : records) {
        if (!record[col].isNull()) {
            record[col] = Value::text(labels[binOf(record[col].asNumber(), edges)]);
        }
    }
    return DiscretizeResult{Relation(std::move(schema), std::move(records)), edges, labels};
}

NormalizeResult minMaxNormalize(const Relation& relation, const std::vector<std::string>& attrs) {
    ScalerParams scaler;
    std::vector<std::size_t> cols;
    for (const auto& name : attrs) {
        const auto col = relation.columnIndex(name);
        if (relation.schema()[col].kind != AttrKind::Continuous) {
            throw DataError("attribute '" + name + "' is not continuous");
        }
        double lo = 0.0;
        double hi = 0.0;
        bool first = true;
        for (const auto& record : relation.records()) {
            if (record[col].isNull()) {
                throw DataError("null encountered in '" + name + "' during normalization");
            }
            const double x = record[col].asNumber();
            lo = first ? x : std::min(lo, x);
            hi = first ? x : std::max(hi, x);
            first = false;
        }
        if (first) throw DataError("attribute '" + name + "' has no values to normalize");
        scaler.ranges.push_back(AttributeRange{name, lo, hi});
        cols.push_back(col);
    }
    auto records = relation.records();
    for (auto& record : records) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            record[cols[i]] = Value::number(normalizeValue(record[cols[i]].asNumber(), scaler.ranges[i]));
        }
    }
    return NormalizeResult{Relation(relation.schema(), std::move(records)), std::move(scaler)};
}

double normalizeValue(double x, const AttributeRange& range) {
    if (range.max == range.min) return 0.0;
    return (x - range.min) / (range.max - range.min);
}

double denormalizeValue(double y, const AttributeRange& range) {
    return range.min + y * (range.max - range.min);
}

}
