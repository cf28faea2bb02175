#ifndef TAXMINER_PREPARE_H
#define TAXMINER_PREPARE_H

#include <string>
#include <vector>

#include "taxminer/Relation.h"

namespace taxminer {

enum class NullPolicy { DropRows, Impute };

NullPolicy nullPolicyFromName(const std::string& name);

// Removes every null among mining-relevant columns: DropRows discards the
// affected rows, Impute fills mode (categorical) or median (continuous).
// Identifier/text columns pass through untouched.
Relation prepare(const Relation& relation, NullPolicy policy);

enum class BinMethod { EqualWidth, EqualFrequency };

BinMethod binMethodFromName(const std::string& name);

struct DiscretizeResult {
    Relation relation;
    std::vector<double> edges;        // bin boundaries including both ends
    std::vector<std::string> labels;  // "[lo,hi)" per bin, last closed
};

// Replaces a continuous column by interval labels; duplicate edges collapse,
// so the result has at most `bins` bins and a constant column yields one.
DiscretizeResult discretize(const Relation& relation, const std::string& attr,
                            std::size_t bins, BinMethod method);

struct NormalizeResult {
    Relation relation;
    ScalerParams scaler;
};

// Min-max normalization to [0,1]; a constant column maps to 0.0.
NormalizeResult minMaxNormalize(const Relation& relation, const std::vector<std::string>& attrs);

double normalizeValue(double x, const AttributeRange& range);
double denormalizeValue(double y, const AttributeRange& range);

}

#endif
