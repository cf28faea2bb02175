#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "taxminer/Bayes.h"
#include "taxminer/Csv.h"
#include "taxminer/Errors.h"
#include "taxminer/Generator.h"
#include "taxminer/Induction.h"
#include "taxminer/Pipeline.h"
#include "taxminer/Prepare.h"
#include "taxminer/Som.h"

namespace fs = std::filesystem;
using namespace taxminer;

namespace {

// A dataset directory holds exactly one .csv next to its schema.json.
Relation loadDataset(const std::string& dir) {
    if (!fs::is_directory(dir)) throw DataError("'" + dir + "' is not a directory");
    const auto schemaPath = fs::path(dir) / "schema.json";
    if (!fs::exists(schemaPath)) throw DataError("no schema.json in '" + dir + "'");
    std::vector<std::string> csvs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            csvs.push_back(entry.path().string());
        }
    }
    std::sort(csvs.begin(), csvs.end());
    if (csvs.size() != 1) {
        throw DataError("expected exactly one .csv in '" + dir + "', found " +
                        std::to_string(csvs.size()));
    }
    return loadCsvFile(csvs.front(), loadSchemaFile(schemaPath.string()));
}

void writeDataset(const std::string& dir, const std::string& csvName, const Relation& relation) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create directory '" + dir + "': " + ec.message());
    writeCsvFile(relation, (fs::path(dir) / csvName).string());
    writeSchemaFile(relation.schema(), (fs::path(dir) / "schema.json").string());
}

void writeText(const std::string& dir, const std::string& name, const std::string& content) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create directory '" + dir + "': " + ec.message());
    const auto path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << content;
}

std::vector<std::string> splitList(const std::string& text) {
    std::vector<std::string> parts;
    std::string part;
    for (char c : text) {
        if (c == ',') {
            parts.push_back(part);
            part.clear();
        } else {
            part += c;
        }
    }
    parts.push_back(part);
    for (const auto& p : parts) {
        if (p.empty()) throw UsageError("empty entry in list '" + text + "'");
    }
    return parts;
}

struct GenArgs {
    std::uint64_t seed = 0;
    std::size_t rows = 0;
    std::string patternsFile;
    double nullFraction = 0.0;
    std::string out;
};

void cmdGen(const GenArgs& args) {
    if (args.rows < 1) throw UsageError("--rows must be at least 1");
    auto patterns = caseStudyPatterns();
    if (!args.patternsFile.empty()) {
        try {
            patterns = patternsFromJson(loadJsonFile(args.patternsFile));
            // surface pattern mistakes before any file is written
            generateContribuyentes(args.seed, 1, patterns, 0.0);
        } catch (const DataError& e) {
            throw UsageError("bad patterns file '" + args.patternsFile + "': " + e.what());
        }
    }
    const auto relation = generateContribuyentes(args.seed, args.rows, patterns, args.nullFraction);
    writeDataset(args.out, "contribuyentes.csv", relation);
}

struct PrepareArgs {
    std::string in;
    std::string out;
    std::string policy = "drop";
    std::vector<std::string> discretizeSpecs;
};

void cmdPrepare(const PrepareArgs& args) {
    auto relation = prepare(loadDataset(args.in), nullPolicyFromName(args.policy));
    for (const auto& spec : args.discretizeSpecs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw UsageError("--discretize expects attr=bins[:method], got '" + spec + "'");
        }
        const auto attr = spec.substr(0, eq);
        auto rest = spec.substr(eq + 1);
        std::string method = "width";
        const auto colon = rest.find(':');
        if (colon != std::string::npos) {
            method = rest.substr(colon + 1);
            rest = rest.substr(0, colon);
        }
        std::size_t bins = 0;
        try {
            bins = std::stoul(rest);
        } catch (const std::exception&) {
            throw UsageError("--discretize expects a bin count, got '" + rest + "'");
        }
        relation = discretize(relation, attr, bins, binMethodFromName(method)).relation;
    }
    writeDataset(args.out, "prepared.csv", relation);
}

struct SomArgs {
    std::string in;
    std::string out;
    std::string features;
    std::string grid = "2x2";
    std::size_t iterations = 500;
    std::uint64_t seed = 0;
    double sigma0 = 0.0;
    double mapRadius = 0.0;
    double rate0 = 0.1;
    std::string outAttr = "CSOM";
};

void cmdSom(const SomArgs& args) {
    SomParams params;
    const auto x = args.grid.find('x');
    if (x == std::string::npos || x == 0 || x + 1 == args.grid.size()) {
        throw UsageError("--grid expects WIDTHxHEIGHT, got '" + args.grid + "'");
    }
    try {
        params.width = std::stoul(args.grid.substr(0, x));
        params.height = std::stoul(args.grid.substr(x + 1));
    } catch (const std::exception&) {
        throw UsageError("--grid expects WIDTHxHEIGHT, got '" + args.grid + "'");
    }
    params.iterations = args.iterations;
    params.sigma0 = args.sigma0;
    params.mapRadius = args.mapRadius;
    params.rate0 = args.rate0;
    params.seed = args.seed;

    const auto features = splitList(args.features);
    const auto relation = loadDataset(args.in);
    auto normalized = minMaxNormalize(relation, features);
    const auto inputs = featureMatrix(normalized.relation, features);
    const auto initial = initGrid(params, features.size());
    const double initialQe = quantizationError(initial, inputs);
    const auto grid = train(inputs, params);
    const double finalQe = quantizationError(grid, inputs);
    auto assigned = assign(grid, relation, features, normalized.scaler, args.outAttr);

    writeDataset(args.out, "augmented.csv", assigned.relation);
    writeText(args.out, "csom_counts.txt", countsTable(grid, assigned.assignment));
    nlohmann::json doc;
    doc["initial_qe"] = initialQe;
    doc["final_qe"] = finalQe;
    doc["grid"] = gridToJson(grid);
    doc["assignment"] = assignmentToJson(assigned.assignment);
    writeJsonFile(doc, (fs::path(args.out) / "som.json").string());
}

struct TreeArgs {
    std::string in;
    std::string out;
    std::string classAttr;
    std::string predictors;
    std::string variant = "c45";
    std::string criterion = "ratio";
    std::size_t minSupport = 2;
    std::size_t maxDepth = 0;
};

void cmdTree(const TreeArgs& args) {
    InduceConfig config;
    config.variant = variantFromName(args.variant);
    config.criterion = criterionFromName(args.criterion);
    config.minSupport = args.minSupport;
    config.maxDepth = args.maxDepth;
    if (!args.predictors.empty()) config.predictors = splitList(args.predictors);

    const auto relation = loadDataset(args.in);
    const auto tree = induce(relation, args.classAttr, config);
    const auto rules = extractRules(tree);

    writeText(args.out, "rules.txt", rulesToTable(rules));
    writeText(args.out, "tree.dot", treeToDot(tree));
    writeJsonFile(treeToJson(tree), (fs::path(args.out) / "tree.json").string());
    writeJsonFile(rulesToJson(rules), (fs::path(args.out) / "rules.json").string());
}

struct BayesArgs {
    std::string in;
    std::string out;
    std::string classAttr;
    std::string features;
    double smoothing = 0.0;
    std::string netFile;
    std::string query;
    std::string evidence;
};

void cmdBayes(const BayesArgs& args) {
    if (args.in.empty() == args.netFile.empty()) {
        throw UsageError("give exactly one of --in (fit from data) or --net (declared net)");
    }
    if (!args.netFile.empty()) {
        const auto net = netFromJson(loadJsonFile(args.netFile));
        writeText(args.out, "net.dot", netToDot(net));
        std::string product;
        for (const auto& term : factorization(net)) product += term;
        writeText(args.out, "factorization.txt", product + "\n");
        writeJsonFile(netToJson(net), (fs::path(args.out) / "net.json").string());
        if (!args.query.empty()) {
            Evidence evidence;
            if (!args.evidence.empty()) {
                for (const auto& pair : splitList(args.evidence)) {
                    const auto eq = pair.find('=');
                    if (eq == std::string::npos || eq == 0 || eq + 1 == pair.size()) {
                        throw UsageError("--evidence expects node=state, got '" + pair + "'");
                    }
                    evidence[pair.substr(0, eq)] = pair.substr(eq + 1);
                }
            }
            const auto posterior = infer(net, args.query, evidence);
            nlohmann::json doc;
            doc["query"] = args.query;
            doc["evidence"] = evidence;
            doc["states"] = posterior.states;
            doc["probs"] = posterior.probs;
            writeJsonFile(doc, (fs::path(args.out) / "posterior.json").string());
        }
        return;
    }
    if (args.classAttr.empty()) throw UsageError("--class is required with --in");
    if (args.features.empty()) throw UsageError("--features is required with --in");
    const auto relation = loadDataset(args.in);
    const auto model =
        fitNaiveBayes(relation, args.classAttr, splitList(args.features), args.smoothing);
    writeText(args.out, "cpt.txt", nbReport(model));
    writeText(args.out, "net.dot", netToDot(toBayesNet(model)));
    writeJsonFile(nbToJson(model), (fs::path(args.out) / "nb.json").string());
    writeJsonFile(netToJson(toBayesNet(model)), (fs::path(args.out) / "net.json").string());
}

struct PipelineArgs {
    std::string planFile;
    std::string in;
    std::string out;
    bool noTimings = false;
};

void cmdPipeline(const PipelineArgs& args) {
    Plan plan;
    try {
        plan = planFromJson(loadJsonFile(args.planFile));
    } catch (const DataError& e) {
        throw UsageError("bad plan file '" + args.planFile + "': " + e.what());
    }
    const auto relation = loadDataset(args.in);
    const auto report = runPlan(plan, relation);
    writeReport(report, args.out, !args.noTimings);
}

}

int main(int argc, char** argv) {
    CLI::App app{"deterministic tabular mining workbench: synthetic taxpayer data, "
                 "self-organizing maps, decision trees and Bayes nets"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* genCmd = app.add_subcommand("gen", "generate a synthetic taxpayer dataset");
    genCmd->add_option("--seed", gen.seed, "PRNG seed")->required();
    genCmd->add_option("--rows", gen.rows, "number of records")->required();
    genCmd->add_option("--patterns", gen.patternsFile, "JSON pattern file (default: built-in)");
    genCmd->add_option("--null-fraction", gen.nullFraction, "fraction of blanked cells")
        ->check(CLI::Range(0.0, 1.0));
    genCmd->add_option("-o,--out", gen.out, "output dataset directory")->required();
    genCmd->callback([&] { cmdGen(gen); });

    PrepareArgs prep;
    auto* prepCmd = app.add_subcommand("prepare", "handle nulls and discretize columns");
    prepCmd->add_option("--in", prep.in, "input dataset directory")->required();
    prepCmd->add_option("-o,--out", prep.out, "output dataset directory")->required();
    prepCmd->add_option("--policy", prep.policy, "null policy: drop or impute");
    prepCmd->add_option("--discretize", prep.discretizeSpecs,
                        "attr=bins[:method], method width or frequency; repeatable");
    prepCmd->callback([&] { cmdPrepare(prep); });

    SomArgs som;
    auto* somCmd = app.add_subcommand("som", "train a self-organizing map and label records");
    somCmd->add_option("--in", som.in, "input dataset directory")->required();
    somCmd->add_option("-o,--out", som.out, "output directory")->required();
    somCmd->add_option("--features", som.features, "comma-separated continuous attributes")
        ->required();
    somCmd->add_option("--grid", som.grid, "map size WIDTHxHEIGHT");
    somCmd->add_option("--iterations", som.iterations, "training iterations");
    somCmd->add_option("--seed", som.seed, "PRNG seed")->required();
    somCmd->add_option("--sigma0", som.sigma0, "initial neighborhood radius (0: half the map)");
    somCmd->add_option("--map-radius", som.mapRadius, "decay radius (0: same as sigma0)");
    somCmd->add_option("--rate0", som.rate0, "initial learning rate");
    somCmd->add_option("--out-attr", som.outAttr, "name of the appended cell attribute");
    somCmd->callback([&] { cmdSom(som); });

    TreeArgs tree;
    auto* treeCmd = app.add_subcommand("tree", "induce a decision tree and extract rules");
    treeCmd->add_option("--in", tree.in, "input dataset directory")->required();
    treeCmd->add_option("-o,--out", tree.out, "output directory")->required();
    treeCmd->add_option("--class", tree.classAttr, "categorical class attribute")->required();
    treeCmd->add_option("--predictors", tree.predictors,
                        "comma-separated predictors (default: every mining attribute)");
    treeCmd->add_option("--variant", tree.variant, "id3 or c45");
    treeCmd->add_option("--criterion", tree.criterion, "gain or ratio");
    treeCmd->add_option("--min-support", tree.minSupport, "minimum records per split");
    treeCmd->add_option("--max-depth", tree.maxDepth, "depth limit, 0 for none");
    treeCmd->callback([&] { cmdTree(tree); });

    BayesArgs bayes;
    auto* bayesCmd =
        app.add_subcommand("bayes", "fit a naive Bayes pivot or query a declared net");
    bayesCmd->add_option("--in", bayes.in, "input dataset directory (fit mode)");
    bayesCmd->add_option("-o,--out", bayes.out, "output directory")->required();
    bayesCmd->add_option("--class", bayes.classAttr, "pivot class attribute (fit mode)");
    bayesCmd->add_option("--features", bayes.features, "comma-separated features (fit mode)");
    bayesCmd->add_option("--smoothing", bayes.smoothing, "additive smoothing, default 0");
    bayesCmd->add_option("--net", bayes.netFile, "declared net JSON (query mode)");
    bayesCmd->add_option("--query", bayes.query, "node to infer (query mode)");
    bayesCmd->add_option("--evidence", bayes.evidence, "comma-separated node=state pairs");
    bayesCmd->callback([&] { cmdBayes(bayes); });

    PipelineArgs pipe;
    auto* pipeCmd = app.add_subcommand("pipeline", "run a full strategy from a plan file");
    pipeCmd->add_option("--plan", pipe.planFile, "plan JSON file")->required();
    pipeCmd->add_option("--in", pipe.in, "input dataset directory")->required();
    pipeCmd->add_option("--out", pipe.out, "output report directory")->required();
    pipeCmd->add_flag("--no-timings", pipe.noTimings, "omit timings for byte-stable output");
    pipeCmd->callback([&] { cmdPipeline(pipe); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
