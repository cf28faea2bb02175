#include "taxminer/Induction.h"

#include <algorithm>
#include <cmath>

#include "taxminer/Csv.h"
#include "taxminer/Errors.h"

namespace taxminer {

namespace {

constexpr double kEps = 1e-12;

double entropyOfCounts(const std::vector<std::size_t>& counts, std::size_t total) {
    double bits = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        bits -= p * std::log2(p);
    }
    return bits;
}

struct Context {
    const Relation& relation;
    std::size_t classCol;
    std::vector<std::size_t> predictorCols;
    const InduceConfig& config;
};

std::vector<std::size_t> classCounts(const Context& ctx, const std::vector<std::size_t>& rows) {
    const auto& attr = ctx.relation.schema()[ctx.classCol];
    std::vector<std::size_t> counts(attr.levels.size(), 0);
    for (auto row : rows) {
        ++counts[levelIndex(attr, ctx.relation.at(row, ctx.classCol).asText())];
    }
    return counts;
}

struct CategoricalEval {
    bool usable = false;
    double gain = 0.0;
    double splitInfo = 0.0;
    std::vector<std::size_t> observedLevels;
};

CategoricalEval evalCategorical(const Context& ctx, const std::vector<std::size_t>& rows,
                                std::size_t col, double nodeEntropy) {
    const auto& attr = ctx.relation.schema()[col];
    const auto& classAttr = ctx.relation.schema()[ctx.classCol];
    std::vector<std::vector<std::size_t>> perLevel(attr.levels.size(),
                                                   std::vector<std::size_t>(classAttr.levels.size(), 0));
    std::vector<std::size_t> levelTotals(attr.levels.size(), 0);
    for (auto row : rows) {
        const auto v = levelIndex(attr, ctx.relation.at(row, col).asText());
        const auto c = levelIndex(classAttr, ctx.relation.at(row, ctx.classCol).asText());
        ++perLevel[v][c];
        ++levelTotals[v];
    }
    CategoricalEval eval;
    for (std::size_t v = 0; v < attr.levels.size(); ++v) {
        if (levelTotals[v] > 0) eval.observedLevels.push_back(v);
    }
    if (eval.observedLevels.size() < 2) return eval;
    const auto total = rows.size();
    double children = 0.0;
    double splitInfo = 0.0;
    for (auto v : eval.observedLevels) {
        const double w = static_cast<double>(levelTotals[v]) / static_cast<double>(total);
        children += w * entropyOfCounts(perLevel[v], levelTotals[v]);
        splitInfo -= w * std::log2(w);
    }
    eval.usable = true;
    eval.gain = nodeEntropy - children;
    eval.splitInfo = splitInfo;
    return eval;
}

struct ThresholdEval {
    bool usable = false;
    double gain = 0.0;
    double splitInfo = 0.0;
    double cut = 0.0;
};

ThresholdEval evalThreshold(const Context& ctx, const std::vector<std::size_t>& rows,
                            std::size_t col, double nodeEntropy) {
    const auto& classAttr = ctx.relation.schema()[ctx.classCol];
    std::vector<std::pair<double, std::size_t>> points;
    points.reserve(rows.size());
    for (auto row : rows) {
        points.emplace_back(ctx.relation.at(row, col).asNumber(),
                            levelIndex(classAttr, ctx.relation.at(row, ctx.classCol).asText()));
    }
    std::sort(points.begin(), points.end());
    ThresholdEval eval;
    if (points.empty() || points.front().first == points.back().first) return eval;

    std::vector<std::size_t> left(classAttr.levels.size(), 0);
    std::vector<std::size_t> right(classAttr.levels.size(), 0);
    for (const auto& [value, cls] : points) ++right[cls];

    const auto total = points.size();
    for (std::size_t i = 0; i + 1 < total; ++i) {
        ++left[points[i].second];
        --right[points[i].second];
        if (points[i].first == points[i + 1].first) continue;
        const double cut = (points[i].first + points[i + 1].first) / 2.0;
        const auto nLeft = i + 1;
        const auto nRight = total - nLeft;
        const double wLeft = static_cast<double>(nLeft) / static_cast<double>(total);
        const double wRight = static_cast<double>(nRight) / static_cast<double>(total);
        const double gain = nodeEntropy - wLeft * entropyOfCounts(left, nLeft) -
                            wRight * entropyOfCounts(right, nRight);
        // Ascending sweep: a strict improvement keeps the smallest cut on ties.
        if (!eval.usable || gain > eval.gain + kEps) {
            eval.usable = true;
            eval.gain = gain;
            eval.cut = cut;
            eval.splitInfo = -wLeft * std::log2(wLeft) - wRight * std::log2(wRight);
        }
    }
    return eval;
}

void requireNullFree(const Relation& relation, std::size_t col) {
    const auto& name = relation.schema()[col].name;
    for (std::size_t row = 0; row < relation.rowCount(); ++row) {
        if (relation.at(row, col).isNull()) {
            throw DataError("null in column '" + name + "'; prepare the relation first");
        }
    }
}

std::size_t categoricalColumn(const Relation& relation, const std::string& name) {
    const auto col = relation.columnIndex(name);
    if (relation.schema()[col].kind != AttrKind::Categorical) {
        throw DataError("attribute '" + name + "' is not categorical");
    }
    requireNullFree(relation, col);
    return col;
}

std::vector<std::size_t> allRows(const Relation& relation) {
    std::vector<std::size_t> rows(relation.rowCount());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return rows;
}

std::unique_ptr<TreeNode> build(const Context& ctx, const std::vector<std::size_t>& rows,
                                std::vector<bool> used, std::size_t depth) {
    const auto& classAttr = ctx.relation.schema()[ctx.classCol];
    const auto counts = classCounts(ctx, rows);
    std::size_t majority = 0;
    for (std::size_t i = 1; i < counts.size(); ++i) {
        if (counts[i] > counts[majority]) majority = i;
    }
    const double purity = static_cast<double>(counts[majority]) / static_cast<double>(rows.size());

    auto leaf = [&] {
        return makeLeaf(classAttr.levels[majority], rows.size(), purity);
    };
    if (counts[majority] == rows.size()) return leaf();
    if (ctx.config.maxDepth > 0 && depth >= ctx.config.maxDepth) return leaf();
    if (rows.size() < ctx.config.minSupport) return leaf();

    const double nodeEntropy = entropyOfCounts(counts, rows.size());
    const bool useRatio =
        ctx.config.variant == TreeVariant::C45 && ctx.config.criterion == SplitCriterion::Ratio;

    struct Best {
        bool found = false;
        std::size_t col = 0;
        double value = 0.0;
        double gain = 0.0;
        bool isThreshold = false;
        double cut = 0.0;
        std::vector<std::size_t> observedLevels;
    } best;

    for (auto col : ctx.predictorCols) {
        const auto kind = ctx.relation.schema()[col].kind;
        double value = 0.0;
        double gain = 0.0;
        bool isThreshold = false;
        double cut = 0.0;
        std::vector<std::size_t> observedLevels;
        if (kind == AttrKind::Categorical) {
            if (used[col]) continue;
            const auto eval = evalCategorical(ctx, rows, col, nodeEntropy);
            if (!eval.usable || eval.gain <= kEps) continue;
            gain = eval.gain;
            value = useRatio ? eval.gain / eval.splitInfo : eval.gain;
            observedLevels = eval.observedLevels;
        } else {
            const auto eval = evalThreshold(ctx, rows, col, nodeEntropy);
            if (!eval.usable || eval.gain <= kEps) continue;
            gain = eval.gain;
            value = useRatio ? eval.gain / eval.splitInfo : eval.gain;
            isThreshold = true;
            cut = eval.cut;
        }
        // Strict improvement only: criterion ties resolve to schema order.
        if (!best.found || value > best.value + kEps) {
            best = Best{true, col, value, gain, isThreshold, cut, std::move(observedLevels)};
        }
    }

    if (!best.found) return leaf();

    const auto& attr = ctx.relation.schema()[best.col];
    if (best.isThreshold) {
        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (auto row : rows) {
            (ctx.relation.at(row, best.col).asNumber() < best.cut ? left : right).push_back(row);
        }
        return makeThresholdSplit(attr.name, best.cut, best.gain, rows.size(),
                                  build(ctx, left, used, depth + 1),
                                  build(ctx, right, used, depth + 1));
    }

    used[best.col] = true;
    std::vector<std::string> branches;
    std::vector<std::unique_ptr<TreeNode>> children;
    for (auto level : best.observedLevels) {
        std::vector<std::size_t> subset;
        for (auto row : rows) {
            if (levelIndex(attr, ctx.relation.at(row, best.col).asText()) == level) {
                subset.push_back(row);
            }
        }
        branches.push_back(attr.levels[level]);
        children.push_back(build(ctx, subset, used, depth + 1));
    }
    return makeCategoricalSplit(attr.name, best.gain, rows.size(), std::move(branches),
                                std::move(children));
}

void collectRules(const TreeNode& node, std::vector<RuleCondition>& path, std::vector<Rule>& out) {
    if (node.leaf) {
        out.push_back(Rule{path, node.label, node.purity, node.support});
        return;
    }
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        RuleCondition condition;
        condition.attr = node.attr;
        if (node.isThreshold) {
            condition.isThreshold = true;
            condition.lower = (i == 0);
            condition.cut = node.cut;
        } else {
            condition.level = node.branches[i];
        }
        path.push_back(condition);
        collectRules(*node.children[i], path, out);
        path.pop_back();
    }
}

std::string dotEscape(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

int dotNode(const TreeNode& node, int& next, std::string& out) {
    const int id = next++;
    if (node.leaf) {
        out += "  n" + std::to_string(id) + " [shape=ellipse, label=\"" + dotEscape(node.label) +
               "\\n" + std::to_string(node.support) + " obs, " +
               std::to_string(static_cast<long long>(std::llround(node.purity * 100.0))) +
               "%\"];\n";
        return id;
    }
    out += "  n" + std::to_string(id) + " [shape=box, label=\"" + dotEscape(node.attr) +
           "\\ngain " + formatNumber(node.gain) + "\"];\n";
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        std::string edge;
        if (node.isThreshold) {
            edge = (i == 0 ? "< " : ">= ") + formatNumber(node.cut);
        } else {
            edge = node.branches[i];
        }
        const int child = dotNode(*node.children[i], next, out);
        out += "  n" + std::to_string(id) + " -> n" + std::to_string(child) + " [label=\"" +
               dotEscape(edge) + "\"];\n";
    }
    return id;
}

nlohmann::json nodeToJson(const TreeNode& node) {
    nlohmann::json doc;
    if (node.leaf) {
        doc["kind"] = "leaf";
        doc["label"] = node.label;
        doc["support"] = node.support;
        doc["purity"] = node.purity;
        return doc;
    }
    doc["kind"] = "split";
    doc["attr"] = node.attr;
    doc["test"] = node.isThreshold ? "threshold" : "categorical";
    if (node.isThreshold) doc["cut"] = node.cut;
    doc["gain"] = node.gain;
    doc["support"] = node.support;
    nlohmann::json branches = nlohmann::json::array();
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        nlohmann::json branch;
        branch["branch"] = node.isThreshold ? (i == 0 ? "lt" : "ge") : node.branches[i];
        branch["child"] = nodeToJson(*node.children[i]);
        branches.push_back(std::move(branch));
    }
    doc["branches"] = std::move(branches);
    return doc;
}

}

std::string variantName(TreeVariant variant) {
    return variant == TreeVariant::Id3 ? "id3" : "c45";
}

TreeVariant variantFromName(const std::string& name) {
    if (name == "id3") return TreeVariant::Id3;
    if (name == "c45") return TreeVariant::C45;
    throw UsageError("unknown tree variant '" + name + "' (expected id3 or c45)");
}

std::string criterionName(SplitCriterion criterion) {
    return criterion == SplitCriterion::Gain ? "gain" : "ratio";
}

SplitCriterion criterionFromName(const std::string& name) {
    if (name == "gain") return SplitCriterion::Gain;
    if (name == "ratio") return SplitCriterion::Ratio;
    throw UsageError("unknown split criterion '" + name + "' (expected gain or ratio)");
}

double informationContent(const std::vector<double>& probs) {
    double sum = 0.0;
    for (double p : probs) {
        if (p < 0.0) throw DataError("negative probability in distribution");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw DataError("distribution does not sum to 1");
    double bits = 0.0;
    for (double p : probs) {
        if (p > 0.0) bits -= p * std::log2(p);
    }
    return bits;
}

double entropy(const Relation& relation, const std::string& classAttr) {
    if (relation.rowCount() == 0) throw DataError("entropy of an empty relation");
    const auto col = categoricalColumn(relation, classAttr);
    const auto& attr = relation.schema()[col];
    std::vector<std::size_t> counts(attr.levels.size(), 0);
    for (std::size_t row = 0; row < relation.rowCount(); ++row) {
        ++counts[levelIndex(attr, relation.at(row, col).asText())];
    }
    return entropyOfCounts(counts, relation.rowCount());
}

double infoGain(const Relation& relation, const std::string& classAttr, const std::string& attr) {
    if (relation.rowCount() == 0) throw DataError("information gain on an empty relation");
    const auto classCol = categoricalColumn(relation, classAttr);
    const auto col = categoricalColumn(relation, attr);
    InduceConfig config;
    Context ctx{relation, classCol, {}, config};
    const auto rows = allRows(relation);
    const double nodeEntropy = entropyOfCounts(classCounts(ctx, rows), rows.size());
    const auto eval = evalCategorical(ctx, rows, col, nodeEntropy);
    return eval.usable ? eval.gain : 0.0;
}

double gainRatio(const Relation& relation, const std::string& classAttr, const std::string& attr) {
    if (relation.rowCount() == 0) throw DataError("gain ratio on an empty relation");
    const auto classCol = categoricalColumn(relation, classAttr);
    const auto col = categoricalColumn(relation, attr);
    InduceConfig config;
    Context ctx{relation, classCol, {}, config};
    const auto rows = allRows(relation);
    const double nodeEntropy = entropyOfCounts(classCounts(ctx, rows), rows.size());
    const auto eval = evalCategorical(ctx, rows, col, nodeEntropy);
    if (!eval.usable || eval.splitInfo <= 0.0) {
        throw DataError("attribute '" + attr + "' has zero split information");
    }
    return eval.gain / eval.splitInfo;
}

ThresholdResult bestThreshold(const Relation& relation, const std::string& classAttr,
                              const std::string& attr) {
    if (relation.rowCount() == 0) throw DataError("threshold search on an empty relation");
    const auto classCol = categoricalColumn(relation, classAttr);
    const auto col = relation.columnIndex(attr);
    if (relation.schema()[col].kind != AttrKind::Continuous) {
        throw DataError("attribute '" + attr + "' is not continuous");
    }
    requireNullFree(relation, col);
    InduceConfig config;
    Context ctx{relation, classCol, {}, config};
    const auto rows = allRows(relation);
    const double nodeEntropy = entropyOfCounts(classCounts(ctx, rows), rows.size());
    const auto eval = evalThreshold(ctx, rows, col, nodeEntropy);
    if (!eval.usable) {
        throw DataError("attribute '" + attr + "' needs at least two distinct values");
    }
    return ThresholdResult{eval.cut, eval.gain};
}

std::unique_ptr<TreeNode> makeLeaf(std::string label, std::size_t support, double purity) {
    auto node = std::make_unique<TreeNode>();
    node->leaf = true;
    node->label = std::move(label);
    node->support = support;
    node->purity = purity;
    return node;
}

std::unique_ptr<TreeNode> makeThresholdSplit(std::string attr, double cut, double gain,
                                             std::size_t support, std::unique_ptr<TreeNode> lt,
                                             std::unique_ptr<TreeNode> ge) {
    auto node = std::make_unique<TreeNode>();
    node->leaf = false;
    node->attr = std::move(attr);
    node->isThreshold = true;
    node->cut = cut;
    node->gain = gain;
    node->support = support;
    node->branches = {"lt", "ge"};
    node->children.push_back(std::move(lt));
    node->children.push_back(std::move(ge));
    return node;
}

std::unique_ptr<TreeNode> makeCategoricalSplit(std::string attr, double gain, std::size_t support,
                                               std::vector<std::string> branches,
                                               std::vector<std::unique_ptr<TreeNode>> children) {
    if (branches.size() != children.size() || branches.size() < 2) {
        throw DataError("categorical split needs matching branch labels and children");
    }
    auto node = std::make_unique<TreeNode>();
    node->leaf = false;
    node->attr = std::move(attr);
    node->isThreshold = false;
    node->gain = gain;
    node->support = support;
    node->branches = std::move(branches);
    node->children = std::move(children);
    return node;
}

DecisionTree induce(const Relation& relation, const std::string& classAttr,
                    const InduceConfig& config) {
    if (relation.rowCount() == 0) throw DataError("cannot induce a tree from an empty relation");
    const auto classCol = categoricalColumn(relation, classAttr);

    std::vector<std::size_t> predictorCols;
    if (config.predictors.empty()) {
        for (auto col : relation.miningColumns()) {
            if (col != classCol) predictorCols.push_back(col);
        }
    } else {
        for (const auto& name : config.predictors) {
            const auto col = relation.columnIndex(name);
            const auto kind = relation.schema()[col].kind;
            if (col == classCol) throw UsageError("class attribute listed among predictors");
            if (kind != AttrKind::Categorical && kind != AttrKind::Continuous) {
                throw DataError("predictor '" + name + "' is not a mining attribute");
            }
            predictorCols.push_back(col);
        }
        std::sort(predictorCols.begin(), predictorCols.end());
        predictorCols.erase(std::unique(predictorCols.begin(), predictorCols.end()),
                            predictorCols.end());
    }
    for (auto col : predictorCols) {
        if (config.variant == TreeVariant::Id3 &&
            relation.schema()[col].kind == AttrKind::Continuous) {
            throw DataError("ID3 cannot use continuous predictor '" +
                            relation.schema()[col].name + "'");
        }
        requireNullFree(relation, col);
    }

    InduceConfig effective = config;
    if (effective.variant == TreeVariant::Id3) effective.criterion = SplitCriterion::Gain;

    Context ctx{relation, classCol, std::move(predictorCols), effective};
    DecisionTree tree;
    tree.classAttr = classAttr;
    tree.variant = config.variant;
    tree.schema = relation.schema();
    tree.root = build(ctx, allRows(relation), std::vector<bool>(relation.columnCount(), false), 0);
    return tree;
}

std::string classify(const DecisionTree& tree, const Record& record) {
    const TreeNode* node = tree.root.get();
    while (!node->leaf) {
        std::size_t col = tree.schema.size();
        for (std::size_t i = 0; i < tree.schema.size(); ++i) {
            if (tree.schema[i].name == node->attr) {
                col = i;
                break;
            }
        }
        if (col >= record.size()) {
            throw DataError("record lacks attribute '" + node->attr + "'");
        }
        const auto& value = record[col];
        if (value.isNull()) {
            throw DataError("null value for '" + node->attr + "' during classification");
        }
        std::size_t next = node->children.size();
        if (node->isThreshold) {
            next = value.asNumber() < node->cut ? 0 : 1;
        } else {
            for (std::size_t i = 0; i < node->branches.size(); ++i) {
                if (node->branches[i] == value.asText()) {
                    next = i;
                    break;
                }
            }
            if (next == node->children.size()) {
                throw DataError("no branch for value '" + value.asText() + "' of '" + node->attr +
                                "'");
            }
        }
        node = node->children[next].get();
    }
    return node->label;
}

std::vector<Rule> extractRules(const DecisionTree& tree) {
    std::vector<Rule> rules;
    std::vector<RuleCondition> path;
    collectRules(*tree.root, path, rules);
    std::stable_sort(rules.begin(), rules.end(),
                     [](const Rule& a, const Rule& b) { return a.support > b.support; });
    return rules;
}

std::string conditionToText(const RuleCondition& condition) {
    if (condition.isThreshold) {
        return condition.attr + (condition.lower ? " < " : " >= ") + formatNumber(condition.cut);
    }
    return condition.attr + " = " + condition.level;
}

std::string ruleToText(const Rule& rule, const std::string& classAttr) {
    std::string out;
    if (rule.conditions.empty()) {
        out = "(always)";
    } else {
        for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
            if (i > 0) out += " AND ";
            out += conditionToText(rule.conditions[i]);
        }
    }
    out += " => " + classAttr + " = " + rule.label;
    out += " [" + std::to_string(static_cast<long long>(std::llround(rule.confidence * 100.0))) +
           "%, " + std::to_string(rule.support) + " obs]";
    return out;
}

std::string rulesToTable(const std::vector<Rule>& rules) {
    std::size_t depth = 1;
    for (const auto& rule : rules) depth = std::max(depth, rule.conditions.size());

    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> header;
    for (std::size_t i = 0; i < depth; ++i) header.push_back("cond" + std::to_string(i + 1));
    header.push_back("class");
    header.push_back("conf");
    header.push_back("obs");
    grid.push_back(header);
    for (const auto& rule : rules) {
        std::vector<std::string> line;
        for (std::size_t i = 0; i < depth; ++i) {
            line.push_back(i < rule.conditions.size() ? conditionToText(rule.conditions[i]) : "");
        }
        line.push_back(rule.label);
        line.push_back(std::to_string(static_cast<long long>(std::llround(rule.confidence * 100.0))) + "%");
        line.push_back(std::to_string(rule.support));
        grid.push_back(std::move(line));
    }

    std::vector<std::size_t> widths(grid.front().size(), 0);
    for (const auto& line : grid) {
        for (std::size_t i = 0; i < line.size(); ++i) widths[i] = std::max(widths[i], line[i].size());
    }
    std::string out;
    for (const auto& line : grid) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (i > 0) out += " | ";
            out += line[i];
            out += std::string(widths[i] - line[i].size(), ' ');
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += '\n';
    }
    return out;
}

nlohmann::json rulesToJson(const std::vector<Rule>& rules) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& rule : rules) {
        nlohmann::json entry;
        nlohmann::json conditions = nlohmann::json::array();
        for (const auto& condition : rule.conditions) {
            nlohmann::json jc;
            jc["attr"] = condition.attr;
            if (condition.isThreshold) {
                jc["op"] = condition.lower ? "lt" : "ge";
                jc["value"] = condition.cut;
            } else {
                jc["op"] = "eq";
                jc["value"] = condition.level;
            }
            conditions.push_back(std::move(jc));
        }
        entry["conditions"] = std::move(conditions);
        entry["class"] = rule.label;
        entry["confidence"] = rule.confidence;
        entry["support"] = rule.support;
        list.push_back(std::move(entry));
    }
    return list;
}

nlohmann::json treeToJson(const DecisionTree& tree) {
    nlohmann::json doc;
    doc["class"] = tree.classAttr;
    doc["variant"] = tree.variant == TreeVariant::Id3 ? "id3" : "c45";
    doc["root"] = nodeToJson(*tree.root);
    return doc;
}

std::string treeToDot(const DecisionTree& tree) {
    std::string out = "digraph decision_tree {\n  rankdir=TB;\n";
    int next = 0;
    dotNode(*tree.root, next, out);
    out += "}\n";
    return out;
}

}
