#ifndef TAXMINER_INDUCTION_H
#define TAXMINER_INDUCTION_H

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "taxminer/Relation.h"

namespace taxminer {

// Bits of information in a discrete distribution; 0*log2(0) counts as 0.
// The probabilities must be non-negative and sum to 1 within 1e-9.
double informationContent(const std::vector<double>& probs);

double entropy(const Relation& relation, const std::string& classAttr);

// Plain information gain of partitioning by a categorical attribute.
double infoGain(const Relation& relation, const std::string& classAttr, const std::string& attr);

// Gain divided by the information content of the branch sizes; a partition
// with a single observed branch has no split information and is an error.
double gainRatio(const Relation& relation, const std::string& classAttr, const std::string& attr);

struct ThresholdResult {
    double cut = 0.0;
    double gain = 0.0;
};

// Best binary cut for a continuous attribute, searched over midpoints of
// consecutive distinct values; ties resolve to the smallest cut.
ThresholdResult bestThreshold(const Relation& relation, const std::string& classAttr,
                              const std::string& attr);

enum class TreeVariant { Id3, C45 };
enum class SplitCriterion { Gain, Ratio };

std::string variantName(TreeVariant variant);
TreeVariant variantFromName(const std::string& name);
std::string criterionName(SplitCriterion criterion);
SplitCriterion criterionFromName(const std::string& name);

struct InduceConfig {
    TreeVariant variant = TreeVariant::C45;
    SplitCriterion criterion = SplitCriterion::Ratio;  // Id3 always uses plain gain
    std::size_t minSupport = 2;
    std::size_t maxDepth = 0;                   // 0 means unlimited
    std::vector<std::string> predictors;        // empty means every mining attribute
};

struct TreeNode {
    bool leaf = true;
    std::size_t support = 0;
    // leaf payload
    std::string label;
    double purity = 1.0;
    // split payload
    std::string attr;
    bool isThreshold = false;
    double cut = 0.0;
    double gain = 0.0;
    std::vector<std::string> branches;  // level per child, or "lt"/"ge"
    std::vector<std::unique_ptr<TreeNode>> children;
};

std::unique_ptr<TreeNode> makeLeaf(std::string label, std::size_t support, double purity);
std::unique_ptr<TreeNode> makeThresholdSplit(std::string attr, double cut, double gain,
                                             std::size_t support, std::unique_ptr<TreeNode> lt,
                                             std::unique_ptr<TreeNode> ge);
std::unique_ptr<TreeNode> makeCategoricalSplit(std::string attr, double gain, std::size_t support,
                                               std::vector<std::string> branches,
                                               std::vector<std::unique_ptr<TreeNode>> children);

struct DecisionTree {
    std::string classAttr;
    TreeVariant variant = TreeVariant::C45;
    std::vector<AttributeSchema> schema;  // column layout records are classified against
    std::unique_ptr<TreeNode> root;
};

// Recursive top-down induction. Stops on pure nodes, exhausted predictors,
// non-positive gain, support below minSupport, or maxDepth.
DecisionTree induce(const Relation& relation, const std::string& classAttr,
                    const InduceConfig& config = {});

std::string classify(const DecisionTree& tree, const Record& record);

struct RuleCondition {
    std::string attr;
    bool isThreshold = false;
    bool lower = false;  // attr < cut when set, attr >= cut otherwise
    double cut = 0.0;
    std::string level;
};

struct Rule {
    std::vector<RuleCondition> conditions;
    std::string label;
    double confidence = 1.0;
    std::size_t support = 0;
};

// One rule per leaf, conditions in root-to-leaf order, sorted by support
// descending (stable, so traversal order breaks ties).
std::vector<Rule> extractRules(const DecisionTree& tree);

std::string conditionToText(const RuleCondition& condition);
std::string ruleToText(const Rule& rule, const std::string& classAttr);
std::string rulesToTable(const std::vector<Rule>& rules);
nlohmann::json rulesToJson(const std::vector<Rule>& rules);

nlohmann::json treeToJson(const DecisionTree& tree);
std::string treeToDot(const DecisionTree& tree);

}

#endif
