#ifndef TAXMINER_BAYES_H
#define TAXMINER_BAYES_H

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "taxminer/Relation.h"

namespace taxminer {

struct BayesNode {
    std::string name;
    std::vector<std::string> states;  // non-empty, duplicate-free, no commas
};

struct Dag {
    std::vector<BayesNode> nodes;
    std::vector<std::pair<std::string, std::string>> arcs;  // parent, child
};

// Topological order via stable Kahn (declaration order breaks ties); throws
// DataError listing one cycle when the graph is not acyclic.
std::vector<std::string> checkAcyclic(const Dag& dag);

// Parents in arc-declaration order; that order also keys the CPT rows.
std::vector<std::string> parentsOf(const Dag& dag, const std::string& node);

struct Cpt {
    std::string node;
    std::vector<std::string> parents;        // must match arc-declaration order
    std::vector<std::vector<double>> table;  // parent-combo index -> distribution
};

class BayesNet {
public:
    BayesNet(Dag dag, std::vector<Cpt> cpts);

    const Dag& dag() const { return dag_; }
    const std::vector<std::string>& topologicalOrder() const { return topoOrder_; }
    const BayesNode& node(const std::string& name) const;
    const Cpt& cpt(const std::string& name) const;
    std::size_t nodeIndex(const std::string& name) const;
    std::size_t stateIndex(const std::string& node, const std::string& state) const;

private:
    Dag dag_;
    std::vector<Cpt> cpts_;  // aligned with dag_.nodes
    std::vector<std::string> topoOrder_;
};

using Evidence = std::map<std::string, std::string>;

// Chain-rule product over the factorization; the assignment must cover every
// node.
double jointProbability(const BayesNet& net, const Evidence& assignment);

// Terms like "P(s | e, h)" in topological order.
std::vector<std::string> factorization(const BayesNet& net);

struct Posterior {
    std::vector<std::string> states;
    std::vector<double> probs;
};

// Exact inference by enumerating the full joint; evidence with zero
// probability is an error.
Posterior infer(const BayesNet& net, const std::string& query, const Evidence& evidence);

// True iff P(x | y, z) equals P(x | z) within tol for every evidence
// combination with positive probability, checked by enumeration.
bool conditionallyIndependent(const BayesNet& net, const std::string& x,
                              const std::vector<std::string>& y,
                              const std::vector<std::string>& z, double tol = 1e-9);

struct NaiveBayesModel {
    struct Feature {
        std::string name;
        std::vector<std::string> levels;
        std::vector<std::vector<double>> cond;  // cond[class][level]
    };
    std::string classAttr;
    std::vector<std::string> classLevels;
    std::vector<double> priors;
    std::vector<Feature> features;
    double smoothing = 0.0;
};

// Frequency estimates with optional additive smoothing; zero smoothing
// reproduces the raw relative frequencies and rejects unseen class levels.
NaiveBayesModel fitNaiveBayes(const Relation& relation, const std::string& classAttr,
                              const std::vector<std::string>& features, double smoothing = 0.0);

Posterior nbPosterior(const NaiveBayesModel& model, const std::map<std::string, std::string>& values);
Posterior nbPosterior(const NaiveBayesModel& model, const Relation& relation, std::size_t row);

// Equivalent star-shaped net: class node with one arc to every feature.
BayesNet toBayesNet(const NaiveBayesModel& model);

// Conditional probability table text: one row per class state, one column per
// feature level, except binary SI/NO features which print P(SI|class) only.
std::string nbReport(const NaiveBayesModel& model);

nlohmann::json nbToJson(const NaiveBayesModel& model);
nlohmann::json netToJson(const BayesNet& net);
BayesNet netFromJson(const nlohmann::json& doc);
std::string netToDot(const BayesNet& net);

}

#endif
