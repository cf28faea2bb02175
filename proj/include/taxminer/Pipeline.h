#ifndef TAXMINER_PIPELINE_H
#define TAXMINER_PIPELINE_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "taxminer/Bayes.h"
#include "taxminer/Induction.h"
#include "taxminer/Relation.h"
#include "taxminer/Som.h"

namespace taxminer {

enum class StageKind { Som, Tdidt, Rb };

std::string stageKindName(StageKind kind);
StageKind stageKindFromName(const std::string& name);

// Stage 1 carries no marker; later stages are reached a priori, a posteriori
// and a fortiori in that order.
enum class StageRole { Initial, Priori, Posteriori, Fortiori };

std::string stageRoleName(StageRole role);
StageRole stageRoleAt(std::size_t stageIndex);

struct SomStageConfig {
    std::vector<std::string> features;
    SomParams params;  // seed is overwritten per stage at run time
    std::string outAttr = "CSOM";
};

struct TdidtStageConfig {
    std::string classAttr;
    InduceConfig config;
};

struct RbStageConfig {
    std::string classAttr;  // the pivot
    std::vector<std::string> features;
    double smoothing = 0.0;
};

// Only the member matching `kind` is meaningful.
struct StageSpec {
    StageKind kind = StageKind::Som;
    SomStageConfig som;
    TdidtStageConfig tdidt;
    RbStageConfig rb;
};

struct Strategy {
    std::vector<StageKind> kinds;  // 1 to 4 stages
    bool canonical = false;
};

// Tokens SOM, TDIDT, RB joined by ">". The canonical flag marks the six
// published chains; anything else still parses and runs.
Strategy parseStrategy(const std::string& text);
std::string strategyText(const Strategy& strategy);

struct Plan {
    Strategy strategy;
    std::uint64_t seed = 0;
    std::vector<StageSpec> stages;  // aligned with strategy.kinds
};

Plan planFromJson(const nlohmann::json& doc);
nlohmann::json planToJson(const Plan& plan);

// Simulates schema evolution stage by stage: SOM stages append their out
// attribute, so later stages may reference it. Throws DataError on a missing
// attribute, a kind mismatch or a duplicate out attribute.
std::vector<AttributeSchema> validatePlan(const Plan& plan,
                                          const std::vector<AttributeSchema>& schema);

struct StageResult {
    StageKind kind = StageKind::Som;
    StageRole role = StageRole::Initial;
    double millis = 0.0;

    std::optional<SomGrid> grid;
    std::optional<SomAssignment> assignment;
    std::optional<ScalerParams> scaler;
    double initialQe = 0.0;
    double finalQe = 0.0;

    std::optional<DecisionTree> tree;
    std::vector<Rule> rules;

    std::optional<NaiveBayesModel> nb;
};

struct RunReport {
    Plan plan;
    std::vector<StageResult> stages;
    Relation finalRelation;
};

// Executes the validated plan on a prepared relation. Stage errors carry the
// failing stage number; stage i draws from mixSeed(plan.seed, i).
RunReport runPlan(const Plan& plan, const Relation& relation);

nlohmann::json reportToJson(const RunReport& report, bool includeTimings);

// Writes report.json plus per-stage text artifacts (csom_counts.txt,
// rules.txt, cpt.txt, tree.dot, net.dot) and the augmented dataset
// (augmented.csv, schema.json). A kind appearing more than once prefixes its
// files with "stageN_".
void writeReport(const RunReport& report, const std::string& outDir, bool includeTimings);

}

#endif
