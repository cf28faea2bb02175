#ifndef TAXMINER_GENERATOR_H
#define TAXMINER_GENERATOR_H

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "taxminer/Relation.h"

namespace taxminer {

// One planted constraint: an integer interval on a continuous attribute or a
// fixed level on a categorical one.
struct PatternCondition {
    std::string attr;
    bool isInterval = false;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::string level;
};

// A conjunction of conditions embedded in an exact fraction of the records;
// records outside the pattern are guaranteed to violate the conjunction.
struct Pattern {
    std::string name;
    double fraction = 0.0;
    std::vector<PatternCondition> conditions;
};

// Canonical 24-attribute taxpayer schema used by the whole toolchain.
std::vector<AttributeSchema> contribuyentesSchema();

// Default patterns: four latent segments separable on the five continuous
// features, with threshold boundaries at nroemple 15|16, asinpresdj 1|2 and
// fechanac 1968|1977.
std::vector<Pattern> caseStudyPatterns();

std::vector<Pattern> patternsFromJson(const nlohmann::json& doc);
nlohmann::json patternsToJson(const std::vector<Pattern>& patterns);

// Deterministic synthesis: same arguments, same relation, byte for byte.
// nullFraction > 0 blanks cells of nullable columns untouched by patterns,
// drawn from a separate stream so the underlying values stay identical.
Relation generateContribuyentes(std::uint64_t seed, std::size_t rows,
                                const std::vector<Pattern>& patterns,
                                double nullFraction = 0.0);

}

#endif
