#include "taxminer/Pipeline.h"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "taxminer/Csv.h"
#include "taxminer/Errors.h"
#include "taxminer/Prepare.h"
#include "taxminer/Rng.h"

namespace taxminer {

namespace {

const std::vector<std::vector<StageKind>>& canonicalChains() {
    using K = StageKind;
    static const std::vector<std::vector<StageKind>> chains = {
        {K::Som, K::Rb},
        {K::Tdidt, K::Rb},
        {K::Tdidt, K::Som, K::Rb},
        {K::Som, K::Tdidt, K::Rb},
        {K::Tdidt, K::Rb, K::Som, K::Rb},
        {K::Som, K::Rb, K::Tdidt, K::Rb},
    };
    return chains;
}

std::string stageContext(std::size_t index, StageKind kind) {
    return "stage " + std::to_string(index + 1) + " (" + stageKindName(kind) + "): ";
}

const AttributeSchema* findAttr(const std::vector<AttributeSchema>& schema,
                                const std::string& name) {
    for (const auto& attr : schema) {
        if (attr.name == name) return &attr;
    }
    return nullptr;
}

void checkKeys(const nlohmann::json& config, const std::set<std::string>& allowed,
               const std::string& context) {
    for (const auto& item : config.items()) {
        if (allowed.find(item.key()) == allowed.end()) {
            throw UsageError(context + "unknown key '" + item.key() + "'");
        }
    }
}

std::vector<nlohmann::json> configList(const nlohmann::json& stages, const char* key) {
    if (!stages.contains(key)) return {};
    const auto& entry = stages.at(key);
    if (entry.is_array()) return std::vector<nlohmann::json>(entry.begin(), entry.end());
    return {entry};
}

SomStageConfig somConfigFromJson(const nlohmann::json& config, const std::string& context) {
    checkKeys(config,
              {"features", "width", "height", "iterations", "sigma0", "map_radius", "rate0",
               "out_attr"},
              context);
    SomStageConfig spec;
    if (!config.contains("features")) throw UsageError(context + "needs a 'features' list");
    spec.features = config.at("features").get<std::vector<std::string>>();
    if (spec.features.empty()) throw UsageError(context + "'features' must not be empty");
    spec.params.width = config.value("width", spec.params.width);
    spec.params.height = config.value("height", spec.params.height);
    spec.params.iterations = config.value("iterations", spec.params.iterations);
    spec.params.sigma0 = config.value("sigma0", spec.params.sigma0);
    spec.params.mapRadius = config.value("map_radius", spec.params.mapRadius);
    spec.params.rate0 = config.value("rate0", spec.params.rate0);
    spec.outAttr = config.value("out_attr", spec.outAttr);
    return spec;
}

TdidtStageConfig tdidtConfigFromJson(const nlohmann::json& config, const std::string& context) {
    checkKeys(config, {"class", "predictors", "variant", "criterion", "min_support", "max_depth"},
              context);
    TdidtStageConfig spec;
    if (!config.contains("class")) throw UsageError(context + "needs a 'class' attribute");
    spec.classAttr = config.at("class").get<std::string>();
    spec.config.predictors = config.value("predictors", spec.config.predictors);
    spec.config.variant = variantFromName(config.value("variant", variantName(spec.config.variant)));
    spec.config.criterion =
        criterionFromName(config.value("criterion", criterionName(spec.config.criterion)));
    spec.config.minSupport = config.value("min_support", spec.config.minSupport);
    spec.config.maxDepth = config.value("max_depth", spec.config.maxDepth);
    return spec;
}

RbStageConfig rbConfigFromJson(const nlohmann::json& config, const std::string& context) {
    checkKeys(config, {"class", "features", "smoothing"}, context);
    RbStageConfig spec;
    if (!config.contains("class")) throw UsageError(context + "needs a 'class' pivot attribute");
    spec.classAttr = config.at("class").get<std::string>();
    if (!config.contains("features")) throw UsageError(context + "needs a 'features' list");
    spec.features = config.at("features").get<std::vector<std::string>>();
    if (spec.features.empty()) throw UsageError(context + "'features' must not be empty");
    spec.smoothing = config.value("smoothing", spec.smoothing);
    return spec;
}

nlohmann::json somConfigToJson(const SomStageConfig& spec) {
    nlohmann::json doc;
    doc["features"] = spec.features;
    doc["width"] = spec.params.width;
    doc["height"] = spec.params.height;
    doc["iterations"] = spec.params.iterations;
    doc["sigma0"] = spec.params.sigma0;
    doc["map_radius"] = spec.params.mapRadius;
    doc["rate0"] = spec.params.rate0;
    doc["out_attr"] = spec.outAttr;
    return doc;
}

nlohmann::json tdidtConfigToJson(const TdidtStageConfig& spec) {
    nlohmann::json doc;
    doc["class"] = spec.classAttr;
    doc["predictors"] = spec.config.predictors;
    doc["variant"] = variantName(spec.config.variant);
    doc["criterion"] = criterionName(spec.config.criterion);
    doc["min_support"] = spec.config.minSupport;
    doc["max_depth"] = spec.config.maxDepth;
    return doc;
}

nlohmann::json rbConfigToJson(const RbStageConfig& spec) {
    nlohmann::json doc;
    doc["class"] = spec.classAttr;
    doc["features"] = spec.features;
    doc["smoothing"] = spec.smoothing;
    return doc;
}

void writeTextFile(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << content;
}

}

std::string stageKindName(StageKind kind) {
    switch (kind) {
        case StageKind::Som: return "SOM";
        case StageKind::Tdidt: return "TDIDT";
        case StageKind::Rb: return "RB";
    }
    throw UsageError("invalid stage kind");
}

StageKind stageKindFromName(const std::string& name) {
    if (name == "SOM") return StageKind::Som;
    if (name == "TDIDT") return StageKind::Tdidt;
    if (name == "RB") return StageKind::Rb;
    throw UsageError("unknown strategy token '" + name + "' (expected SOM, TDIDT or RB)");
}

std::string stageRoleName(StageRole role) {
    switch (role) {
        case StageRole::Initial: return "initial";
        case StageRole::Priori: return "priori";
        case StageRole::Posteriori: return "posteriori";
        case StageRole::Fortiori: return "fortiori";
    }
    throw UsageError("invalid stage role");
}

StageRole stageRoleAt(std::size_t stageIndex) {
    switch (stageIndex) {
        case 0: return StageRole::Initial;
        case 1: return StageRole::Priori;
        case 2: return StageRole::Posteriori;
        case 3: return StageRole::Fortiori;
        default: throw UsageError("a strategy has at most 4 stages");
    }
}

Strategy parseStrategy(const std::string& text) {
    Strategy strategy;
    std::string token;
    auto take = [&]() {
        const auto begin = token.find_first_not_of(" \t");
        if (begin == std::string::npos) throw UsageError("empty stage token in strategy");
        const auto end = token.find_last_not_of(" \t");
        strategy.kinds.push_back(stageKindFromName(token.substr(begin, end - begin + 1)));
        token.clear();
    };
    for (char c : text) {
        if (c == '>') {
            take();
        } else {
            token += c;
        }
    }
    take();
    if (strategy.kinds.size() > 4) throw UsageError("a strategy has at most 4 stages");
    for (const auto& chain : canonicalChains()) {
        if (chain == strategy.kinds) {
            strategy.canonical = true;
            break;
        }
    }
    return strategy;
}

std::string strategyText(const Strategy& strategy) {
    std::string text;
    for (std::size_t i = 0; i < strategy.kinds.size(); ++i) {
        if (i > 0) text += ">";
        text += stageKindName(strategy.kinds[i]);
    }
    return text;
}

Plan planFromJson(const nlohmann::json& doc) {
    try {
        checkKeys(doc, {"strategy", "seed", "stages"}, "plan: ");
        if (!doc.contains("strategy")) throw UsageError("plan needs a 'strategy' string");
        Plan plan;
        plan.strategy = parseStrategy(doc.at("strategy").get<std::string>());
        if (!doc.contains("seed")) throw UsageError("plan needs a numeric 'seed'");
        plan.seed = doc.at("seed").get<std::uint64_t>();

        const auto stagesDoc = doc.value("stages", nlohmann::json::object());
        checkKeys(stagesDoc, {"som", "tdidt", "rb"}, "plan stages: ");
        std::map<StageKind, std::vector<nlohmann::json>> configs = {
            {StageKind::Som, configList(stagesDoc, "som")},
            {StageKind::Tdidt, configList(stagesDoc, "tdidt")},
            {StageKind::Rb, configList(stagesDoc, "rb")},
        };
        std::map<StageKind, std::size_t> needed;
        for (auto kind : plan.strategy.kinds) ++needed[kind];
        for (const auto& [kind, list] : configs) {
            const auto want = needed[kind];
            if (list.size() != want) {
                throw UsageError("strategy '" + strategyText(plan.strategy) + "' has " +
                                 std::to_string(want) + " " + stageKindName(kind) +
                                 " stage(s) but the plan configures " +
                                 std::to_string(list.size()));
            }
        }
        std::map<StageKind, std::size_t> used;
        for (std::size_t i = 0; i < plan.strategy.kinds.size(); ++i) {
            const auto kind = plan.strategy.kinds[i];
            const auto& config = configs[kind][used[kind]++];
            const auto context = stageContext(i, kind);
            StageSpec spec;
            spec.kind = kind;
            switch (kind) {
                case StageKind::Som: spec.som = somConfigFromJson(config, context); break;
                case StageKind::Tdidt: spec.tdidt = tdidtConfigFromJson(config, context); break;
                case StageKind::Rb: spec.rb = rbConfigFromJson(config, context); break;
            }
            plan.stages.push_back(std::move(spec));
        }
        return plan;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("bad plan: ") + e.what());
    }
}

nlohmann::json planToJson(const Plan& plan) {
    nlohmann::json doc;
    doc["strategy"] = strategyText(plan.strategy);
    doc["seed"] = plan.seed;
    std::map<StageKind, nlohmann::json> lists;
    for (const auto& spec : plan.stages) {
        nlohmann::json config;
        switch (spec.kind) {
            case StageKind::Som: config = somConfigToJson(spec.som); break;
            case StageKind::Tdidt: config = tdidtConfigToJson(spec.tdidt); break;
            case StageKind::Rb: config = rbConfigToJson(spec.rb); break;
        }
        lists[spec.kind].push_back(std::move(config));
    }
    nlohmann::json stages = nlohmann::json::object();
    for (auto& [kind, list] : lists) {
        const char* key = kind == StageKind::Som ? "som" : kind == StageKind::Tdidt ? "tdidt" : "rb";
        stages[key] = list.size() == 1 ? list.front() : list;
    }
    doc["stages"] = std::move(stages);
    return doc;
}

std::vector<AttributeSchema> validatePlan(const Plan& plan,
                                          const std::vector<AttributeSchema>& schema) {
    if (plan.strategy.kinds.empty()) throw UsageError("empty strategy");
    if (plan.strategy.kinds.size() != plan.stages.size()) {
        throw UsageError("plan stage configs do not match the strategy");
    }
    auto evolved = schema;
    for (std::size_t i = 0; i < plan.stages.size(); ++i) {
        const auto& spec = plan.stages[i];
        const auto context = stageContext(i, spec.kind);
        if (spec.kind != plan.strategy.kinds[i]) {
            throw UsageError(context + "stage kind does not match the strategy");
        }
        switch (spec.kind) {
            case StageKind::Som: {
                if (spec.som.features.empty()) {
                    throw UsageError(context + "'features' must not be empty");
                }
                std::set<std::string> seen;
                for (const auto& feature : spec.som.features) {
                    if (!seen.insert(feature).second) {
                        throw UsageError(context + "feature '" + feature + "' repeats");
                    }
                    const auto* attr = findAttr(evolved, feature);
                    if (!attr) throw DataError(context + "attribute '" + feature + "' not found");
                    if (attr->kind != AttrKind::Continuous) {
                        throw DataError(context + "attribute '" + feature +
                                        "' is not continuous; the map only takes continuous values");
                    }
                }
                if (spec.som.outAttr.empty()) throw UsageError(context + "empty out attribute");
                if (findAttr(evolved, spec.som.outAttr)) {
                    throw DataError(context + "attribute '" + spec.som.outAttr +
                                    "' already exists");
                }
                // grid parameters get the same checks a real grid would apply
                const auto resolved = resolveDefaults(spec.som.params);
                SomGrid probe(resolved, spec.som.features.size(),
                              Eigen::MatrixXd::Zero(
                                  static_cast<Eigen::Index>(resolved.width * resolved.height),
                                  static_cast<Eigen::Index>(spec.som.features.size())));
                AttributeSchema out;
                out.name = spec.som.outAttr;
                out.kind = AttrKind::Categorical;
                out.nullable = false;
                for (std::size_t cell = 0; cell < probe.cellCount(); ++cell) {
                    out.levels.push_back(probe.cellLabel(cell, spec.som.outAttr));
                }
                evolved.push_back(std::move(out));
                break;
            }
            case StageKind::Tdidt: {
                const auto* classAttr = findAttr(evolved, spec.tdidt.classAttr);
                if (!classAttr) {
                    throw DataError(context + "attribute '" + spec.tdidt.classAttr + "' not found");
                }
                if (classAttr->kind != AttrKind::Categorical) {
                    throw DataError(context + "class attribute '" + spec.tdidt.classAttr +
                                    "' is not categorical");
                }
                std::vector<const AttributeSchema*> predictors;
                if (spec.tdidt.config.predictors.empty()) {
                    for (const auto& attr : evolved) {
                        if (attr.name == spec.tdidt.classAttr) continue;
                        if (attr.kind == AttrKind::Continuous || attr.kind == AttrKind::Categorical) {
                            predictors.push_back(&attr);
                        }
                    }
                } else {
                    for (const auto& name : spec.tdidt.config.predictors) {
                        const auto* attr = findAttr(evolved, name);
                        if (!attr) throw DataError(context + "attribute '" + name + "' not found");
                        if (attr->kind != AttrKind::Continuous &&
                            attr->kind != AttrKind::Categorical) {
                            throw DataError(context + "attribute '" + name +
                                            "' cannot be a predictor");
                        }
                        predictors.push_back(attr);
                    }
                }
                if (spec.tdidt.config.variant == TreeVariant::Id3) {
                    for (const auto* attr : predictors) {
                        if (attr->kind == AttrKind::Continuous) {
                            throw DataError(context + "attribute '" + attr->name +
                                            "' is continuous; the basic variant splits on "
                                            "categorical attributes only");
                        }
                    }
                }
                break;
            }
            case StageKind::Rb: {
                const auto* classAttr = findAttr(evolved, spec.rb.classAttr);
                if (!classAttr) {
                    throw DataError(context + "attribute '" + spec.rb.classAttr + "' not found");
                }
                if (classAttr->kind != AttrKind::Categorical) {
                    throw DataError(context + "pivot attribute '" + spec.rb.classAttr +
                                    "' is not categorical");
                }
                if (spec.rb.features.empty()) {
                    throw UsageError(context + "'features' must not be empty");
                }
                std::set<std::string> seen;
                for (const auto& feature : spec.rb.features) {
                    if (feature == spec.rb.classAttr) {
                        throw UsageError(context + "pivot '" + feature + "' listed among features");
                    }
                    if (!seen.insert(feature).second) {
                        throw UsageError(context + "feature '" + feature + "' repeats");
                    }
                    const auto* attr = findAttr(evolved, feature);
                    if (!attr) throw DataError(context + "attribute '" + feature + "' not found");
                    if (attr->kind != AttrKind::Categorical) {
                        throw DataError(context + "attribute '" + feature +
                                        "' is not categorical; discretize it first");
                    }
                }
                if (spec.rb.smoothing < 0.0) {
                    throw UsageError(context + "smoothing must be non-negative");
                }
                break;
            }
        }
    }
    return evolved;
}

RunReport runPlan(const Plan& plan, const Relation& relation) {
    validatePlan(plan, relation.schema());

    Relation current = relation;
    std::vector<StageResult> results;
    for (std::size_t i = 0; i < plan.stages.size(); ++i) {
        const auto& spec = plan.stages[i];
        StageResult result;
        result.kind = spec.kind;
        result.role = stageRoleAt(i);
        const auto started = std::chrono::steady_clock::now();
        try {
            switch (spec.kind) {
                case StageKind::Som: {
                    auto normalized = minMaxNormalize(current, spec.som.features);
                    const auto inputs = featureMatrix(normalized.relation, spec.som.features);
                    SomParams params = spec.som.params;
                    params.seed = mixSeed(plan.seed, i);
                    const auto initial = initGrid(params, spec.som.features.size());
                    result.initialQe = quantizationError(initial, inputs);
                    auto grid = train(inputs, params);
                    result.finalQe = quantizationError(grid, inputs);
                    auto assigned =
                        assign(grid, current, spec.som.features, normalized.scaler, spec.som.outAttr);
                    current = std::move(assigned.relation);
                    result.grid = std::move(grid);
                    result.assignment = std::move(assigned.assignment);
                    result.scaler = std::move(normalized.scaler);
                    break;
                }
                case StageKind::Tdidt: {
                    result.tree = induce(current, spec.tdidt.classAttr, spec.tdidt.config);
                    result.rules = extractRules(*result.tree);
                    break;
                }
                case StageKind::Rb: {
                    result.nb = fitNaiveBayes(current, spec.rb.classAttr, spec.rb.features,
                                              spec.rb.smoothing);
                    break;
                }
            }
        } catch (const DataError& e) {
            throw DataError(stageContext(i, spec.kind) + e.what());
        } catch (const UsageError& e) {
            throw UsageError(stageContext(i, spec.kind) + e.what());
        }
        const auto finished = std::chrono::steady_clock::now();
        result.millis =
            std::chrono::duration<double, std::milli>(finished - started).count();
        results.push_back(std::move(result));
    }
    return RunReport{plan, std::move(results), std::move(current)};
}

nlohmann::json reportToJson(const RunReport& report, bool includeTimings) {
    nlohmann::json doc;
    doc["strategy"] = strategyText(report.plan.strategy);
    doc["canonical"] = report.plan.strategy.canonical;
    doc["seed"] = report.plan.seed;
    doc["row_count"] = report.finalRelation.rowCount();
    doc["final_schema"] = schemaToJson(report.finalRelation.schema());
    nlohmann::json stages = nlohmann::json::array();
    for (std::size_t i = 0; i < report.stages.size(); ++i) {
        const auto& stage = report.stages[i];
        const auto& spec = report.plan.stages[i];
        nlohmann::json entry;
        entry["stage"] = i + 1;
        entry["kind"] = stageKindName(stage.kind);
        entry["role"] = stageRoleName(stage.role);
        if (includeTimings) entry["millis"] = stage.millis;
        switch (stage.kind) {
            case StageKind::Som: {
                entry["config"] = somConfigToJson(spec.som);
                entry["initial_qe"] = stage.initialQe;
                entry["final_qe"] = stage.finalQe;
                nlohmann::json counts;
                for (std::size_t cell = 0; cell < stage.assignment->labels.size(); ++cell) {
                    counts[stage.assignment->labels[cell]] = stage.assignment->cellCounts[cell];
                }
                entry["counts"] = std::move(counts);
                entry["grid"] = gridToJson(*stage.grid);
                break;
            }
            case StageKind::Tdidt: {
                entry["config"] = tdidtConfigToJson(spec.tdidt);
                entry["tree"] = treeToJson(*stage.tree);
                entry["rules"] = rulesToJson(stage.rules);
                break;
            }
            case StageKind::Rb: {
                entry["config"] = rbConfigToJson(spec.rb);
                entry["model"] = nbToJson(*stage.nb);
                entry["net"] = netToJson(toBayesNet(*stage.nb));
                break;
            }
        }
        stages.push_back(std::move(entry));
    }
    doc["stages"] = std::move(stages);
    return doc;
}

void writeReport(const RunReport& report, const std::string& outDir, bool includeTimings) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(outDir, ec);
    if (ec) throw DataError("cannot create directory '" + outDir + "': " + ec.message());

    std::map<StageKind, std::size_t> kindCount;
    for (auto kind : report.plan.strategy.kinds) ++kindCount[kind];
    auto artifactPath = [&](std::size_t index, StageKind kind, const std::string& base) {
        const auto name =
            kindCount[kind] > 1 ? "stage" + std::to_string(index + 1) + "_" + base : base;
        return (fs::path(outDir) / name).string();
    };

    for (std::size_t i = 0; i < report.stages.size(); ++i) {
        const auto& stage = report.stages[i];
        switch (stage.kind) {
            case StageKind::Som:
                writeTextFile(artifactPath(i, stage.kind, "csom_counts.txt"),
                              countsTable(*stage.grid, *stage.assignment));
                break;
            case StageKind::Tdidt:
                writeTextFile(artifactPath(i, stage.kind, "rules.txt"), rulesToTable(stage.rules));
                writeTextFile(artifactPath(i, stage.kind, "tree.dot"), treeToDot(*stage.tree));
                break;
            case StageKind::Rb:
                writeTextFile(artifactPath(i, stage.kind, "cpt.txt"), nbReport(*stage.nb));
                writeTextFile(artifactPath(i, stage.kind, "net.dot"),
                              netToDot(toBayesNet(*stage.nb)));
                break;
        }
    }
    writeCsvFile(report.finalRelation, (fs::path(outDir) / "augmented.csv").string());
    writeSchemaFile(report.finalRelation.schema(), (fs::path(outDir) / "schema.json").string());
    writeJsonFile(reportToJson(report, includeTimings),
                  (fs::path(outDir) / "report.json").string());
}

}
