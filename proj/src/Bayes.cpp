#include "taxminer/Bayes.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "taxminer/Errors.h"

namespace taxminer {

namespace {

constexpr std::size_t kEnumerationLimit = 1u << 20;

void validateDag(const Dag& dag) {
    std::set<std::string> names;
    for (const auto& node : dag.nodes) {
        if (node.name.empty()) throw DataError("net node with empty name");
        if (!names.insert(node.name).second) {
            throw DataError("duplicate net node '" + node.name + "'");
        }
        if (node.states.empty()) throw DataError("node '" + node.name + "' has no states");
        std::set<std::string> states;
        for (const auto& state : node.states) {
            if (!states.insert(state).second) {
                throw DataError("node '" + node.name + "' has duplicate state '" + state + "'");
            }
            if (state.find(',') != std::string::npos) {
                throw DataError("state '" + state + "' of node '" + node.name +
                                "' must not contain a comma");
            }
        }
    }
    std::set<std::pair<std::string, std::string>> arcs;
    for (const auto& [parent, child] : dag.arcs) {
        if (names.find(parent) == names.end() || names.find(child) == names.end()) {
            throw DataError("arc " + parent + " -> " + child + " references an unknown node");
        }
        if (parent == child) throw DataError("self arc on node '" + parent + "'");
        if (!arcs.insert({parent, child}).second) {
            throw DataError("duplicate arc " + parent + " -> " + child);
        }
    }
}

std::size_t productOfStates(const BayesNet& net) {
    std::size_t product = 1;
    for (const auto& node : net.dag().nodes) {
        if (node.states.size() > 0 && product > kEnumerationLimit / node.states.size()) {
            throw UsageError("net is too large for exact enumeration");
        }
        product *= node.states.size();
    }
    return product;
}

// Full assignments visited in mixed-radix order over dag.nodes.
template <typename Fn>
void forEachAssignment(const BayesNet& net, Fn&& fn) {
    const auto& nodes = net.dag().nodes;
    std::vector<std::size_t> state(nodes.size(), 0);
    const auto total = productOfStates(net);
    for (std::size_t it = 0; it < total; ++it) {
        fn(state);
        for (std::size_t i = nodes.size(); i-- > 0;) {
            if (++state[i] < nodes[i].states.size()) break;
            state[i] = 0;
        }
    }
}

double cptEntry(const BayesNet& net, const std::vector<std::size_t>& assignment,
                std::size_t nodeIdx) {
    const auto& nodes = net.dag().nodes;
    const auto& cpt = net.cpt(nodes[nodeIdx].name);
    std::size_t combo = 0;
    for (const auto& parent : cpt.parents) {
        const auto parentIdx = net.nodeIndex(parent);
        combo = combo * nodes[parentIdx].states.size() + assignment[parentIdx];
    }
    return cpt.table[combo][assignment[nodeIdx]];
}

double jointOf(const BayesNet& net, const std::vector<std::size_t>& assignment) {
    double product = 1.0;
    for (std::size_t i = 0; i < net.dag().nodes.size(); ++i) {
        product *= cptEntry(net, assignment, i);
    }
    return product;
}

std::vector<std::size_t> resolveEvidence(const BayesNet& net, const Evidence& evidence) {
    // npos marks free nodes
    std::vector<std::size_t> fixed(net.dag().nodes.size(), static_cast<std::size_t>(-1));
    for (const auto& [name, state] : evidence) {
        fixed[net.nodeIndex(name)] = net.stateIndex(name, state);
    }
    return fixed;
}

bool matches(const std::vector<std::size_t>& assignment, const std::vector<std::size_t>& fixed) {
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (fixed[i] != static_cast<std::size_t>(-1) && fixed[i] != assignment[i]) return false;
    }
    return true;
}

std::string formatProb(double p) {
    char buffer[16];
    std::snprintf(buffer, sizeof(buffer), "%.3f", p);
    return buffer;
}

bool isBinarySiNo(const std::vector<std::string>& levels) {
    return levels.size() == 2 &&
           ((levels[0] == "SI" && levels[1] == "NO") || (levels[0] == "NO" && levels[1] == "SI"));
}

}

std::vector<std::string> checkAcyclic(const Dag& dag) {
    validateDag(dag);
    std::vector<std::size_t> indegree(dag.nodes.size(), 0);
    auto indexOf = [&](const std::string& name) {
        for (std::size_t i = 0; i < dag.nodes.size(); ++i) {
            if (dag.nodes[i].name == name) return i;
        }
        throw DataError("unknown node '" + name + "'");
    };
    for (const auto& [parent, child] : dag.arcs) ++indegree[indexOf(child)];

    std::vector<bool> emitted(dag.nodes.size(), false);
    std::vector<std::string> order;
    while (order.size() < dag.nodes.size()) {
        bool progressed = false;
        for (std::size_t i = 0; i < dag.nodes.size(); ++i) {
            if (emitted[i] || indegree[i] != 0) continue;
            emitted[i] = true;
            order.push_back(dag.nodes[i].name);
            for (const auto& [parent, child] : dag.arcs) {
                if (parent == dag.nodes[i].name) --indegree[indexOf(child)];
            }
            progressed = true;
            break;  // restart the scan so declaration order stays authoritative
        }
        if (!progressed) {
            // walk the remaining nodes to present one concrete cycle
            std::size_t start = 0;
            while (emitted[start]) ++start;
            std::vector<std::size_t> path;
            std::size_t current = start;
            std::set<std::size_t> seen;
            while (seen.insert(current).second) {
                path.push_back(current);
                for (const auto& [parent, child] : dag.arcs) {
                    if (indexOf(child) == current && !emitted[indexOf(parent)]) {
                        current = indexOf(parent);
                        break;
                    }
                }
            }
            std::string cycle = dag.nodes[current].name;
            for (auto it = path.rbegin(); it != path.rend(); ++it) {
                cycle += " -> " + dag.nodes[*it].name;
                if (*it == current) break;
            }
            throw DataError("net contains a cycle: " + cycle);
        }
    }
    return order;
}

std::vector<std::string> parentsOf(const Dag& dag, const std::string& node) {
    std::vector<std::string> parents;
    for (const auto& [parent, child] : dag.arcs) {
        if (child == node) parents.push_back(parent);
    }
    return parents;
}

BayesNet::BayesNet(Dag dag, std::vector<Cpt> cpts) : dag_(std::move(dag)) {
    topoOrder_ = checkAcyclic(dag_);

    cpts_.resize(dag_.nodes.size());
    std::vector<bool> covered(dag_.nodes.size(), false);
    for (auto& cpt : cpts) {
        const auto idx = nodeIndex(cpt.node);
        if (covered[idx]) throw DataError("node '" + cpt.node + "' has two CPTs");
        const auto expected = parentsOf(dag_, cpt.node);
        if (cpt.parents != expected) {
            throw DataError("CPT parents for '" + cpt.node +
                            "' must follow arc declaration order");
        }
        std::size_t combos = 1;
        for (const auto& parent : cpt.parents) {
            combos *= dag_.nodes[nodeIndex(parent)].states.size();
        }
        if (cpt.table.size() != combos) {
            throw DataError("CPT for '" + cpt.node + "' has " + std::to_string(cpt.table.size()) +
                            " rows, expected " + std::to_string(combos));
        }
        const auto stateCount = dag_.nodes[idx].states.size();
        for (const auto& distribution : cpt.table) {
            if (distribution.size() != stateCount) {
                throw DataError("CPT row for '" + cpt.node + "' has wrong arity");
            }
            double sum = 0.0;
            for (double p : distribution) {
                if (p < 0.0) throw DataError("negative probability in CPT for '" + cpt.node + "'");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-9) {
                throw DataError("CPT row for '" + cpt.node + "' sums to " + std::to_string(sum));
            }
        }
        covered[idx] = true;
        cpts_[idx] = std::move(cpt);
    }
    for (std::size_t i = 0; i < covered.size(); ++i) {
        if (!covered[i]) throw DataError("node '" + dag_.nodes[i].name + "' has no CPT");
    }
}

const BayesNode& BayesNet::node(const std::string& name) const {
    return dag_.nodes[nodeIndex(name)];
}

const Cpt& BayesNet::cpt(const std::string& name) const { return cpts_[nodeIndex(name)]; }

std::size_t BayesNet::nodeIndex(const std::string& name) const {
    for (std::size_t i = 0; i < dag_.nodes.size(); ++i) {
        if (dag_.nodes[i].name == name) return i;
    }
    throw DataError("unknown node '" + name + "'");
}

std::size_t BayesNet::stateIndex(const std::string& nodeName, const std::string& state) const {
    const auto& states = node(nodeName).states;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i] == state) return i;
    }
    throw DataError("node '" + nodeName + "' has no state '" + state + "'");
}

double jointProbability(const BayesNet& net, const Evidence& assignment) {
    const auto& nodes = net.dag().nodes;
    if (assignment.size() != nodes.size()) {
        throw DataError("joint probability needs a state for every node");
    }
    std::vector<std::size_t> states(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto it = assignment.find(nodes[i].name);
        if (it == assignment.end()) {
            throw DataError("assignment misses node '" + nodes[i].name + "'");
        }
        states[i] = net.stateIndex(nodes[i].name, it->second);
    }
    return jointOf(net, states);
}

std::vector<std::string> factorization(const BayesNet& net) {
    std::vector<std::string> terms;
    for (const auto& name : net.topologicalOrder()) {
        const auto parents = parentsOf(net.dag(), name);
        if (parents.empty()) {
            terms.push_back("P(" + name + ")");
            continue;
        }
        std::string term = "P(" + name + " | ";
        for (std::size_t i = 0; i < parents.size(); ++i) {
            if (i > 0) term += ", ";
            term += parents[i];
        }
        terms.push_back(term + ")");
    }
    return terms;
}

Posterior infer(const BayesNet& net, const std::string& query, const Evidence& evidence) {
    const auto queryIdx = net.nodeIndex(query);
    if (evidence.find(query) != evidence.end()) {
        throw UsageError("query node '" + query + "' appears in the evidence");
    }
    const auto fixed = resolveEvidence(net, evidence);

    Posterior posterior;
    posterior.states = net.dag().nodes[queryIdx].states;
    posterior.probs.assign(posterior.states.size(), 0.0);
    forEachAssignment(net, [&](const std::vector<std::size_t>& assignment) {
        if (!matches(assignment, fixed)) return;
        posterior.probs[assignment[queryIdx]] += jointOf(net, assignment);
    });
    double total = 0.0;
    for (double p : posterior.probs) total += p;
    if (total <= 0.0) throw DataError("evidence has zero probability");
    for (double& p : posterior.probs) p /= total;
    return posterior;
}

bool conditionallyIndependent(const BayesNet& net, const std::string& x,
                              const std::vector<std::string>& y,
                              const std::vector<std::string>& z, double tol) {
    std::set<std::string> seen{x};
    for (const auto& name : y) {
        net.nodeIndex(name);
        if (!seen.insert(name).second) throw UsageError("variable '" + name + "' repeats");
    }
    for (const auto& name : z) {
        net.nodeIndex(name);
        if (!seen.insert(name).second) throw UsageError("variable '" + name + "' repeats");
    }

    // every assignment of y and z states, mixed radix over the two lists
    std::vector<std::string> names(z.begin(), z.end());
    names.insert(names.end(), y.begin(), y.end());
    std::vector<std::size_t> radix;
    std::size_t combos = 1;
    for (const auto& name : names) {
        radix.push_back(net.node(name).states.size());
        combos *= radix.back();
    }
    for (std::size_t it = 0; it < combos; ++it) {
        Evidence zEvidence;
        Evidence fullEvidence;
        std::size_t rest = it;
        for (std::size_t i = 0; i < names.size(); ++i) {
            const auto state = rest % radix[i];
            rest /= radix[i];
            const auto& label = net.node(names[i]).states[state];
            if (i < z.size()) zEvidence[names[i]] = label;
            fullEvidence[names[i]] = label;
        }
        Posterior withZ;
        try {
            withZ = infer(net, x, zEvidence);
        } catch (const DataError&) {
            continue;  // the conditioning set itself has zero probability
        }
        Posterior withBoth;
        try {
            withBoth = infer(net, x, fullEvidence);
        } catch (const DataError&) {
            continue;
        }
        for (std::size_t i = 0; i < withZ.probs.size(); ++i) {
            if (std::abs(withZ.probs[i] - withBoth.probs[i]) > tol) return false;
        }
    }
    return true;
}

NaiveBayesModel fitNaiveBayes(const Relation& relation, const std::string& classAttr,
                              const std::vector<std::string>& features, double smoothing) {
    if (smoothing < 0.0) throw UsageError("smoothing must be non-negative");
    if (relation.rowCount() == 0) throw DataError("cannot fit on an empty relation");
    const auto classCol = relation.columnIndex(classAttr);
    const auto& classSchema = relation.schema()[classCol];
    if (classSchema.kind != AttrKind::Categorical) {
        throw DataError("class attribute '" + classAttr + "' is not categorical");
    }

    std::vector<std::size_t> featureCols;
    std::set<std::string> seen;
    for (const auto& name : features) {
        if (name == classAttr) throw UsageError("class attribute listed among features");
        if (!seen.insert(name).second) throw UsageError("feature '" + name + "' repeats");
        const auto col = relation.columnIndex(name);
        if (relation.schema()[col].kind != AttrKind::Categorical) {
            throw DataError("feature '" + name + "' is not categorical; discretize it first");
        }
        featureCols.push_back(col);
    }
    if (featureCols.empty()) throw UsageError("feature list is empty");

    for (std::size_t row = 0; row < relation.rowCount(); ++row) {
        if (relation.at(row, classCol).isNull()) {
            throw DataError("null in column '" + classAttr + "'; prepare the relation first");
        }
        for (std::size_t i = 0; i < featureCols.size(); ++i) {
            if (relation.at(row, featureCols[i]).isNull()) {
                throw DataError("null in column '" + features[i] +
                                "'; prepare the relation first");
            }
        }
    }

    NaiveBayesModel model;
    model.classAttr = classAttr;
    model.classLevels = classSchema.levels;
    model.smoothing = smoothing;

    const auto classCount = classSchema.levels.size();
    std::vector<std::size_t> classTotals(classCount, 0);
    for (std::size_t row = 0; row < relation.rowCount(); ++row) {
        ++classTotals[levelIndex(classSchema, relation.at(row, classCol).asText())];
    }
    for (std::size_t c = 0; c < classCount; ++c) {
        if (classTotals[c] == 0 && smoothing == 0.0) {
            throw DataError("class level '" + classSchema.levels[c] +
                            "' absent from data with zero smoothing");
        }
        model.priors.push_back(
            (static_cast<double>(classTotals[c]) + smoothing) /
            (static_cast<double>(relation.rowCount()) + smoothing * static_cast<double>(classCount)));
    }

    for (std::size_t i = 0; i < featureCols.size(); ++i) {
        const auto& featureSchema = relation.schema()[featureCols[i]];
        NaiveBayesModel::Feature feature;
        feature.name = featureSchema.name;
        feature.levels = featureSchema.levels;
        std::vector<std::vector<std::size_t>> counts(classCount,
                                                     std::vector<std::size_t>(feature.levels.size(), 0));
        for (std::size_t row = 0; row < relation.rowCount(); ++row) {
            const auto c = levelIndex(classSchema, relation.at(row, classCol).asText());
            const auto v = levelIndex(featureSchema, relation.at(row, featureCols[i]).asText());
            ++counts[c][v];
        }
        for (std::size_t c = 0; c < classCount; ++c) {
            std::vector<double> distribution;
            const double denom = static_cast<double>(classTotals[c]) +
                                 smoothing * static_cast<double>(feature.levels.size());
            for (std::size_t v = 0; v < feature.levels.size(); ++v) {
                distribution.push_back(denom > 0.0
                                           ? (static_cast<double>(counts[c][v]) + smoothing) / denom
                                           : 0.0);
            }
            feature.cond.push_back(std::move(distribution));
        }
        model.features.push_back(std::move(feature));
    }
    return model;
}

Posterior nbPosterior(const NaiveBayesModel& model, const std::map<std::string, std::string>& values) {
    Posterior posterior;
    posterior.states = model.classLevels;
    posterior.probs.assign(model.classLevels.size(), 0.0);
    for (std::size_t c = 0; c < model.classLevels.size(); ++c) {
        double score = model.priors[c];
        for (const auto& feature : model.features) {
            const auto it = values.find(feature.name);
            if (it == values.end()) {
                throw DataError("record lacks a value for feature '" + feature.name + "'");
            }
            std::size_t level = feature.levels.size();
            for (std::size_t v = 0; v < feature.levels.size(); ++v) {
                if (feature.levels[v] == it->second) {
                    level = v;
                    break;
                }
            }
            if (level == feature.levels.size()) {
                throw DataError("feature '" + feature.name + "' has no level '" + it->second + "'");
            }
            score *= feature.cond[c][level];
        }
        posterior.probs[c] = score;
    }
    double total = 0.0;
    for (double p : posterior.probs) total += p;
    if (total <= 0.0) throw DataError("all class posteriors are zero for this record");
    for (double& p : posterior.probs) p /= total;
    return posterior;
}

Posterior nbPosterior(const NaiveBayesModel& model, const Relation& relation, std::size_t row) {
    std::map<std::string, std::string> values;
    for (const auto& feature : model.features) {
        const auto col = relation.columnIndex(feature.name);
        const auto& value = relation.at(row, col);
        if (value.isNull()) {
            throw DataError("null value for feature '" + feature.name + "' at row " +
                            std::to_string(row + 1));
        }
        values[feature.name] = value.asText();
    }
    return nbPosterior(model, values);
}

BayesNet toBayesNet(const NaiveBayesModel& model) {
    Dag dag;
    dag.nodes.push_back(BayesNode{model.classAttr, model.classLevels});
    for (const auto& feature : model.features) {
        dag.nodes.push_back(BayesNode{feature.name, feature.levels});
        dag.arcs.emplace_back(model.classAttr, feature.name);
    }
    std::vector<Cpt> cpts;
    cpts.push_back(Cpt{model.classAttr, {}, {model.priors}});
    for (const auto& feature : model.features) {
        Cpt cpt;
        cpt.node = feature.name;
        cpt.parents = {model.classAttr};
        cpt.table = feature.cond;
        cpts.push_back(std::move(cpt));
    }
    return BayesNet(std::move(dag), std::move(cpts));
}

std::string nbReport(const NaiveBayesModel& model) {
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> featureLine{"feature"};
    std::vector<std::string> columnLine{"column"};
    for (std::size_t i = 0; i < model.features.size(); ++i) {
        const auto& feature = model.features[i];
        const std::string tag = "X" + std::to_string(i + 1);
        if (isBinarySiNo(feature.levels)) {
            featureLine.push_back(feature.name);
            columnLine.push_back("P(" + tag + ")");
        } else {
            for (std::size_t v = 0; v < feature.levels.size(); ++v) {
                featureLine.push_back(v == 0 ? feature.name : "");
                columnLine.push_back("P(" + tag + "," + feature.levels[v] + ")");
            }
        }
    }
    grid.push_back(featureLine);
    grid.push_back(columnLine);
    for (std::size_t c = 0; c < model.classLevels.size(); ++c) {
        std::vector<std::string> line{"P(" + model.classLevels[c] + "|X)"};
        for (const auto& feature : model.features) {
            if (isBinarySiNo(feature.levels)) {
                const auto si = feature.levels[0] == "SI" ? 0 : 1;
                line.push_back(formatProb(feature.cond[c][si]));
            } else {
                for (std::size_t v = 0; v < feature.levels.size(); ++v) {
                    line.push_back(formatProb(feature.cond[c][v]));
                }
            }
        }
        grid.push_back(std::move(line));
    }

    std::vector<std::size_t> widths(grid.front().size(), 0);
    for (const auto& line : grid) {
        for (std::size_t i = 0; i < line.size(); ++i) widths[i] = std::max(widths[i], line[i].size());
    }
    std::string out = "class: " + model.classAttr + "\n";
    for (const auto& line : grid) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (i > 0) out += "  ";
            out += line[i];
            if (i + 1 < line.size()) out += std::string(widths[i] - line[i].size(), ' ');
        }
        out += '\n';
    }
    return out;
}

nlohmann::json nbToJson(const NaiveBayesModel& model) {
    nlohmann::json doc;
    doc["class"] = model.classAttr;
    doc["levels"] = model.classLevels;
    doc["priors"] = model.priors;
    doc["smoothing"] = model.smoothing;
    nlohmann::json features = nlohmann::json::array();
    for (const auto& feature : model.features) {
        nlohmann::json entry;
        entry["name"] = feature.name;
        entry["levels"] = feature.levels;
        entry["cond"] = feature.cond;
        features.push_back(std::move(entry));
    }
    doc["features"] = std::move(features);
    return doc;
}

nlohmann::json netToJson(const BayesNet& net) {
    nlohmann::json doc;
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& node : net.dag().nodes) {
        nodes.push_back(nlohmann::json{{"name", node.name}, {"states", node.states}});
    }
    doc["nodes"] = std::move(nodes);
    nlohmann::json arcs = nlohmann::json::array();
    for (const auto& [parent, child] : net.dag().arcs) {
        arcs.push_back(nlohmann::json::array({parent, child}));
    }
    doc["arcs"] = std::move(arcs);
    nlohmann::json cpts;
    for (const auto& node : net.dag().nodes) {
        const auto& cpt = net.cpt(node.name);
        nlohmann::json rows;
        std::vector<std::size_t> radix;
        for (const auto& parent : cpt.parents) {
            radix.push_back(net.node(parent).states.size());
        }
        for (std::size_t combo = 0; combo < cpt.table.size(); ++combo) {
            std::string key;
            std::size_t rest = combo;
            for (std::size_t i = radix.size(); i-- > 0;) {
                const auto state = rest % radix[i];
                rest /= radix[i];
                const auto& label = net.node(cpt.parents[i]).states[state];
                key = key.empty() ? label : label + "," + key;
            }
            rows[key] = cpt.table[combo];
        }
        cpts[node.name] = std::move(rows);
    }
    doc["cpts"] = std::move(cpts);
    return doc;
}

BayesNet netFromJson(const nlohmann::json& doc) {
    Dag dag;
    if (!doc.contains("nodes") || !doc.contains("arcs") || !doc.contains("cpts")) {
        throw DataError("net document needs 'nodes', 'arcs' and 'cpts'");
    }
    for (const auto& entry : doc.at("nodes")) {
        dag.nodes.push_back(BayesNode{entry.at("name").get<std::string>(),
                                      entry.at("states").get<std::vector<std::string>>()});
    }
    for (const auto& entry : doc.at("arcs")) {
        dag.arcs.emplace_back(entry.at(0).get<std::string>(), entry.at(1).get<std::string>());
    }
    validateDag(dag);

    auto nodeOf = [&](const std::string& name) -> const BayesNode& {
        for (const auto& node : dag.nodes) {
            if (node.name == name) return node;
        }
        throw DataError("unknown node '" + name + "'");
    };

    std::vector<Cpt> cpts;
    for (const auto& node : dag.nodes) {
        if (!doc.at("cpts").contains(node.name)) {
            throw DataError("node '" + node.name + "' has no CPT");
        }
        const auto& rows = doc.at("cpts").at(node.name);
        Cpt cpt;
        cpt.node = node.name;
        cpt.parents = parentsOf(dag, node.name);
        std::vector<std::size_t> radix;
        std::size_t combos = 1;
        for (const auto& parent : cpt.parents) {
            radix.push_back(nodeOf(parent).states.size());
            combos *= radix.back();
        }
        cpt.table.assign(combos, {});
        for (std::size_t combo = 0; combo < combos; ++combo) {
            std::string key;
            std::size_t rest = combo;
            for (std::size_t i = radix.size(); i-- > 0;) {
                const auto state = rest % radix[i];
                rest /= radix[i];
                const auto& label = nodeOf(cpt.parents[i]).states[state];
                key = key.empty() ? label : label + "," + key;
            }
            if (!rows.contains(key)) {
                throw DataError("CPT for '" + node.name + "' misses parent combination '" + key +
                                "'");
            }
            cpt.table[combo] = rows.at(key).get<std::vector<double>>();
        }
        cpts.push_back(std::move(cpt));
    }
    return BayesNet(std::move(dag), std::move(cpts));
}

std::string netToDot(const BayesNet& net) {
    std::string out = "digraph bayes_net {\n";
    for (const auto& node : net.dag().nodes) {
        out += "  \"" + node.name + "\";\n";
    }
    for (const auto& [parent, child] : net.dag().arcs) {
        out += "  \"" + parent + "\" -> \"" + child + "\";\n";
    }
    out += "}\n";
    return out;
}

}
