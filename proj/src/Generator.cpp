#include "taxminer/Generator.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "taxminer/Errors.h"
#include "taxminer/Rng.h"

namespace taxminer {

namespace {

struct BaseColumn {
    AttributeSchema schema;
    std::vector<double> weights;  // categorical draw weights, aligned with levels
    std::int64_t lo = 0;          // continuous base range, integers
    std::int64_t hi = 0;
};

std::vector<BaseColumn> buildColumns() {
    std::vector<BaseColumn> columns;
    auto addCat = [&](const std::string& name, std::vector<std::string> levels,
                      std::vector<double> weights) {
        BaseColumn column;
        column.schema = AttributeSchema{name, AttrKind::Categorical, std::move(levels), true};
        column.weights = std::move(weights);
        columns.push_back(std::move(column));
    };
    auto addBinary = [&](const std::string& name, double pSi) {
        addCat(name, {"NO", "SI"}, {1.0 - pSi, pSi});
    };
    auto addCont = [&](const std::string& name, std::int64_t lo, std::int64_t hi) {
        BaseColumn column;
        column.schema = AttributeSchema{name, AttrKind::Continuous, {}, true};
        column.lo = lo;
        column.hi = hi;
        columns.push_back(std::move(column));
    };

    BaseColumn cuit;
    cuit.schema = AttributeSchema{"CUIT", AttrKind::Identifier, {}, false};
    columns.push_back(std::move(cuit));
    BaseColumn razon;
    razon.schema = AttributeSchema{"razonsocial", AttrKind::Text, {}, false};
    columns.push_back(std::move(razon));

    addCat("perfil", {"Comercio", "Servicios", "Industria", "Agropecuario", "Construccion"},
           {0.30, 0.25, 0.20, 0.15, 0.10});
    addCat("tipopersona", {"Fisica", "Juridica"}, {0.70, 0.30});
    addCont("fechanac", 1940, 1995);
    addCat("estado", {"Activo", "Pasivo"}, {0.85, 0.15});
    addCat("rellab-condicionIVA", {"ResponsableInscripto", "Monotributo", "Exento", "NoInscripto"},
           {0.45, 0.35, 0.10, 0.10});
    addCat("categmonot", {"NoAplica", "A", "B", "C", "D", "E", "F", "G", "H"},
           {0.50, 0.10, 0.10, 0.08, 0.07, 0.05, 0.04, 0.03, 0.03});
    addCat("decjurada", {"NO", "SI"}, {0.20, 0.80});
    addCat("liquidez", {"Baja", "Media", "Alta"}, {0.25, 0.60, 0.15});
    addCont("asinpresdj", 0, 6);
    addBinary("superpodom", 0.20);
    addBinary("supdompjur", 0.15);
    addBinary("supdompfis", 0.15);
    addBinary("blanque-morat", 0.25);
    addBinary("accionista", 0.30);
    addBinary("accmayorit", 0.15);
    addBinary("directivosoc", 0.20);
    addBinary("donayoacred", 0.25);
    addCont("nroemple", 0, 18);
    addCont("nrodenuncias", 0, 5);
    addCont("cantcau", 0, 8);
    addBinary("contribsan", 0.15);
    addCat("siper", {"A", "B", "C", "D", "E"}, {0.30, 0.25, 0.20, 0.15, 0.10});
    return columns;
}

const std::vector<BaseColumn>& columnTable() {
    static const std::vector<BaseColumn> table = buildColumns();
    return table;
}

std::size_t columnOf(const std::string& name) {
    const auto& table = columnTable();
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i].schema.name == name) return i;
    }
    throw DataError("pattern references unknown attribute '" + name + "'");
}

std::string pickWeighted(Rng& rng, const BaseColumn& column) {
    const double u = rng.uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i < column.weights.size(); ++i) {
        cum += column.weights[i];
        if (u < cum) return column.schema.levels[i];
    }
    return column.schema.levels.back();
}

struct ResolvedCondition {
    std::size_t col = 0;
    bool isInterval = false;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::string level;
};

struct ResolvedPattern {
    std::string name;
    double fraction = 0.0;
    std::vector<ResolvedCondition> conditions;

    bool pins(std::size_t col) const {
        return std::any_of(conditions.begin(), conditions.end(),
                           [&](const ResolvedCondition& c) { return c.col == col; });
    }
};

std::vector<ResolvedPattern> resolvePatterns(const std::vector<Pattern>& patterns) {
    const auto& table = columnTable();
    std::vector<ResolvedPattern> resolved;
    double totalFraction = 0.0;
    for (const auto& pattern : patterns) {
        ResolvedPattern out;
        out.name = pattern.name;
        out.fraction = pattern.fraction;
        if (pattern.fraction < 0.0) {
            throw DataError("pattern '" + pattern.name + "' has a negative fraction");
        }
        totalFraction += pattern.fraction;
        std::set<std::size_t> seen;
        for (const auto& condition : pattern.conditions) {
            ResolvedCondition rc;
            rc.col = columnOf(condition.attr);
            const auto& column = table[rc.col];
            if (!seen.insert(rc.col).second) {
                throw DataError("pattern '" + pattern.name + "' constrains '" + condition.attr +
                                "' twice");
            }
            if (condition.isInterval) {
                if (column.schema.kind != AttrKind::Continuous) {
                    throw DataError("interval condition on non-continuous attribute '" +
                                    condition.attr + "'");
                }
                rc.isInterval = true;
                rc.lo = std::max(condition.lo, column.lo);
                rc.hi = std::min(condition.hi, column.hi);
                if (rc.lo > rc.hi) {
                    throw DataError("impossible condition on '" + condition.attr + "' in pattern '" +
                                    pattern.name + "'");
                }
            } else {
                if (column.schema.kind != AttrKind::Categorical) {
                    throw DataError("equality condition on non-categorical attribute '" +
                                    condition.attr + "'");
                }
                if (levelIndex(column.schema, condition.level) == column.schema.levels.size()) {
                    throw DataError("impossible condition on '" + condition.attr + "' in pattern '" +
                                    pattern.name + "': unknown level '" + condition.level + "'");
                }
                rc.level = condition.level;
            }
            out.conditions.push_back(std::move(rc));
        }
        resolved.push_back(std::move(out));
    }
    if (totalFraction > 1.0 + 1e-9) throw DataError("pattern fractions sum beyond 1");
    return resolved;
}

bool satisfiesCondition(const Record& record, const ResolvedCondition& condition) {
    const auto& value = record[condition.col];
    if (value.isNull()) return false;
    if (condition.isInterval) {
        const double x = value.asNumber();
        return x >= static_cast<double>(condition.lo) && x <= static_cast<double>(condition.hi);
    }
    return value.asText() == condition.level;
}

bool satisfiesPattern(const Record& record, const ResolvedPattern& pattern) {
    return std::all_of(pattern.conditions.begin(), pattern.conditions.end(),
                       [&](const ResolvedCondition& c) { return satisfiesCondition(record, c); });
}

// Draws a value outside [lo,hi] within the column's base range.
Value drawComplement(Rng& rng, const BaseColumn& column, const ResolvedCondition& condition) {
    if (condition.isInterval) {
        const std::int64_t below = std::max<std::int64_t>(0, condition.lo - column.lo);
        const std::int64_t above = std::max<std::int64_t>(0, column.hi - condition.hi);
        if (below + above == 0) {
            throw DataError("cannot violate condition on '" + column.schema.name +
                            "': it covers the whole domain");
        }
        const std::int64_t pick = rng.uniformInt(0, below + above - 1);
        const std::int64_t value =
            pick < below ? column.lo + pick : condition.hi + 1 + (pick - below);
        return Value::number(static_cast<double>(value));
    }
    std::vector<std::string> others;
    for (const auto& level : column.schema.levels) {
        if (level != condition.level) others.push_back(level);
    }
    if (others.empty()) {
        throw DataError("cannot violate condition on '" + column.schema.name +
                        "': single-level attribute");
    }
    return Value::text(others[rng.index(others.size())]);
}

std::vector<std::size_t> patternCounts(const std::vector<ResolvedPattern>& patterns, std::size_t rows) {
    std::vector<std::size_t> counts(patterns.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        const double exact = patterns[i].fraction * static_cast<double>(rows);
        counts[i] = static_cast<std::size_t>(std::floor(exact));
        assigned += counts[i];
        remainders.emplace_back(exact - std::floor(exact), i);
    }
    std::size_t leftover = 0;
    {
        double fractionSum = 0.0;
        for (const auto& p : patterns) fractionSum += p.fraction;
        const auto target = static_cast<std::size_t>(std::llround(fractionSum * static_cast<double>(rows)));
        leftover = target > assigned ? target - assigned : 0;
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; i < leftover && i < remainders.size(); ++i) {
        ++counts[remainders[i].second];
    }
    return counts;
}

}

std::vector<AttributeSchema> contribuyentesSchema() {
    std::vector<AttributeSchema> schema;
    for (const auto& column : columnTable()) schema.push_back(column.schema);
    return schema;
}

std::vector<Pattern> caseStudyPatterns() {
    auto interval = [](const std::string& attr, std::int64_t lo, std::int64_t hi) {
        PatternCondition c;
        c.attr = attr;
        c.isInterval = true;
        c.lo = lo;
        c.hi = hi;
        return c;
    };
    auto equals = [](const std::string& attr, const std::string& level) {
        PatternCondition c;
        c.attr = attr;
        c.level = level;
        return c;
    };
    std::vector<Pattern> patterns;
    patterns.push_back(Pattern{"segment-young-regular", 0.50,
                               {interval("fechanac", 1977, 1995), interval("asinpresdj", 0, 1),
                                interval("nroemple", 0, 15), interval("nrodenuncias", 0, 1),
                                interval("cantcau", 0, 1), equals("supdompjur", "NO")}});
    patterns.push_back(Pattern{"segment-young-evasive", 0.14,
                               {interval("fechanac", 1977, 1995), interval("asinpresdj", 2, 6),
                                interval("nroemple", 0, 15), interval("nrodenuncias", 2, 5),
                                interval("cantcau", 2, 5), equals("supdompjur", "SI")}});
    patterns.push_back(Pattern{"segment-old-regular", 0.28,
                               {interval("fechanac", 1940, 1968), interval("asinpresdj", 0, 1),
                                interval("nroemple", 0, 15), interval("nrodenuncias", 0, 1),
                                interval("cantcau", 0, 1), equals("supdompjur", "NO")}});
    patterns.push_back(Pattern{"segment-old-employer", 0.08,
                               {interval("fechanac", 1940, 1968), interval("asinpresdj", 0, 1),
                                interval("nroemple", 16, 18), interval("nrodenuncias", 0, 1),
                                interval("cantcau", 4, 8), equals("supdompjur", "NO")}});
    return patterns;
}

std::vector<Pattern> patternsFromJson(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("patterns") || !doc.at("patterns").is_array()) {
        throw DataError("pattern file must be an object with a 'patterns' array");
    }
    std::vector<Pattern> patterns;
    for (const auto& entry : doc.at("patterns")) {
        Pattern pattern;
        pattern.name = entry.value("name", "pattern-" + std::to_string(patterns.size() + 1));
        if (!entry.contains("fraction")) {
            throw DataError("pattern '" + pattern.name + "' missing 'fraction'");
        }
        pattern.fraction = entry.at("fraction").get<double>();
        for (const auto& c : entry.value("conditions", nlohmann::json::array())) {
            PatternCondition condition;
            if (!c.contains("attr")) throw DataError("pattern condition missing 'attr'");
            condition.attr = c.at("attr").get<std::string>();
            if (c.contains("equals")) {
                condition.level = c.at("equals").get<std::string>();
            } else if (c.contains("between")) {
                condition.isInterval = true;
                condition.lo = c.at("between").at(0).get<std::int64_t>();
                condition.hi = c.at("between").at(1).get<std::int64_t>();
            } else if (c.contains("ge")) {
                condition.isInterval = true;
                condition.lo = c.at("ge").get<std::int64_t>();
                condition.hi = std::numeric_limits<std::int64_t>::max();
            } else if (c.contains("le")) {
                condition.isInterval = true;
                condition.lo = std::numeric_limits<std::int64_t>::min();
                condition.hi = c.at("le").get<std::int64_t>();
            } else {
                throw DataError("pattern condition on '" + condition.attr +
                                "' needs 'equals', 'between', 'ge' or 'le'");
            }
            pattern.conditions.push_back(std::move(condition));
        }
        patterns.push_back(std::move(pattern));
    }
    return patterns;
}

nlohmann::json patternsToJson(const std::vector<Pattern>& patterns) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& pattern : patterns) {
        nlohmann::json entry;
        entry["name"] = pattern.name;
        entry["fraction"] = pattern.fraction;
        nlohmann::json conditions = nlohmann::json::array();
        for (const auto& c : pattern.conditions) {
            nlohmann::json jc;
            jc["attr"] = c.attr;
            if (c.isInterval) {
                jc["between"] = {c.lo, c.hi};
            } else {
                jc["equals"] = c.level;
            }
            conditions.push_back(std::move(jc));
        }
        entry["conditions"] = std::move(conditions);
        list.push_back(std::move(entry));
    }
    return nlohmann::json{{"patterns", list}};
}

Relation generateContribuyentes(std::uint64_t seed, std::size_t rows,
                                const std::vector<Pattern>& patterns, double nullFraction) {
    if (rows == 0) throw UsageError("row count must be positive");
    if (nullFraction < 0.0 || nullFraction >= 1.0) {
        throw UsageError("null fraction must lie in [0,1)");
    }
    const auto& table = columnTable();
    const auto resolved = resolvePatterns(patterns);

    Rng rng(seed);

    const auto counts = patternCounts(resolved, rows);
    std::vector<std::size_t> order(rows);
    for (std::size_t i = 0; i < rows; ++i) order[i] = i;
    rng.shuffle(order);
    // membership[row] = pattern index, or npos for background rows
    std::vector<std::size_t> membership(rows, resolved.size());
    std::size_t cursor = 0;
    for (std::size_t p = 0; p < resolved.size(); ++p) {
        for (std::size_t k = 0; k < counts[p] && cursor < rows; ++k, ++cursor) {
            membership[order[cursor]] = p;
        }
    }

    std::vector<Record> records;
    records.reserve(rows);
    for (std::size_t row = 0; row < rows; ++row) {
        const ResolvedPattern* own =
            membership[row] < resolved.size() ? &resolved[membership[row]] : nullptr;
        Record record(table.size());
        for (std::size_t col = 0; col < table.size(); ++col) {
            const auto& column = table[col];
            const ResolvedCondition* pinned = nullptr;
            if (own != nullptr) {
                for (const auto& condition : own->conditions) {
                    if (condition.col == col) {
                        pinned = &condition;
                        break;
                    }
                }
            }
            if (column.schema.name == "CUIT") {
                static const int prefixes[] = {20, 23, 27, 30, 33};
                const int prefix = prefixes[rng.index(5)];
                const auto middle = 10000000 + (static_cast<std::uint64_t>(row) * 37) % 90000000;
                const auto digit = rng.uniformInt(0, 9);
                char buffer[32];
                std::snprintf(buffer, sizeof(buffer), "%d-%08llu-%lld", prefix,
                              static_cast<unsigned long long>(middle),
                              static_cast<long long>(digit));
                record[col] = Value::text(buffer);
            } else if (column.schema.name == "razonsocial") {
                static const char* kFirst[] = {"COMERCIAL", "AGRO",          "TALLER",
                                               "GRUPO",     "ESTUDIO",       "DISTRIBUIDORA",
                                               "TRANSPORTES", "CONSULTORA"};
                static const char* kSecond[] = {"SOL",   "NORTE",  "LITORAL", "ANDES",
                                                "PAMPA", "RIVERA", "CENTRO",  "DELTA"};
                static const char* kSuffix[] = {"", " S.A.", " S.R.L.", " S.A.S."};
                const auto a = rng.index(8);
                const auto b = rng.index(8);
                const auto s = rng.index(4);
                record[col] = Value::text(std::string(kFirst[a]) + " " + kSecond[b] + " " +
                                          std::to_string(row + 1) + kSuffix[s]);
            } else if (pinned != nullptr) {
                record[col] = pinned->isInterval
                                  ? Value::number(static_cast<double>(rng.uniformInt(pinned->lo, pinned->hi)))
                                  : Value::text(pinned->level);
            } else if (column.schema.kind == AttrKind::Continuous) {
                record[col] = Value::number(static_cast<double>(rng.uniformInt(column.lo, column.hi)));
            } else {
                record[col] = Value::text(pickWeighted(rng, column));
            }
        }

        // A record outside a pattern must falsify its conjunction; redraw one
        // free attribute from the complement until no foreign pattern matches.
        for (int pass = 0; pass < 16; ++pass) {
            bool changed = false;
            for (std::size_t p = 0; p < resolved.size(); ++p) {
                if (own == &resolved[p]) continue;
                if (!satisfiesPattern(record, resolved[p])) continue;
                const ResolvedCondition* target = nullptr;
                for (const auto& condition : resolved[p].conditions) {
                    if (own == nullptr || !own->pins(condition.col)) {
                        target = &condition;
                        break;
                    }
                }
                if (target == nullptr) {
                    throw DataError("pattern '" + resolved[p].name +
                                    "' cannot be avoided by records of pattern '" + own->name + "'");
                }
                record[target->col] = drawComplement(rng, table[target->col], *target);
                changed = true;
            }
            if (!changed) break;
            if (pass == 15) throw DataError("pattern avoidance did not converge");
        }
        records.push_back(std::move(record));
    }

    if (nullFraction > 0.0) {
        Rng nullRng(mixSeed(seed, 0x6e756c6cULL));
        for (std::size_t col = 0; col < table.size(); ++col) {
            const auto& column = table[col];
            const bool mining = column.schema.kind == AttrKind::Continuous ||
                                column.schema.kind == AttrKind::Categorical;
            const bool referenced = std::any_of(resolved.begin(), resolved.end(),
                                                [&](const ResolvedPattern& p) { return p.pins(col); });
            if (!mining || !column.schema.nullable || referenced) continue;
            for (std::size_t row = 0; row < rows; ++row) {
                if (nullRng.bernoulli(nullFraction)) records[row][col] = Value::null();
            }
        }
    }

    return Relation(contribuyentesSchema(), std::move(records));
}

}
