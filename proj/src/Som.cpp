#include "taxminer/Som.h"

#include <algorithm>
#include <cmath>

#include "taxminer/Errors.h"
#include "taxminer/Prepare.h"
#include "taxminer/Rng.h"

namespace taxminer {

namespace {

void validateParams(const SomParams& params) {
    if (params.width < 1 || params.height < 1) throw UsageError("grid dimensions must be positive");
    if (params.iterations < 1) throw UsageError("iteration count must be positive");
    const auto largest = static_cast<double>(std::max(params.width, params.height));
    if (params.sigma0 <= 0.0 || params.sigma0 > largest) {
        throw UsageError("initial radius must lie in (0, max(width, height)]");
    }
    if (params.mapRadius <= 0.0) throw UsageError("map radius must be positive");
    if (params.rate0 <= 0.0 || params.rate0 > 1.0) {
        throw UsageError("initial learning rate must lie in (0, 1]");
    }
}

Eigen::MatrixXd initWeights(Rng& rng, const SomParams& params, std::size_t dimension) {
    Eigen::MatrixXd weights(static_cast<Eigen::Index>(params.width * params.height),
                            static_cast<Eigen::Index>(dimension));
    for (Eigen::Index cell = 0; cell < weights.rows(); ++cell) {
        for (Eigen::Index comp = 0; comp < weights.cols(); ++comp) {
            weights(cell, comp) = rng.uniform();
        }
    }
    return weights;
}

}

SomParams resolveDefaults(SomParams params) {
    if (params.sigma0 == 0.0) {
        params.sigma0 = static_cast<double>(std::max(params.width, params.height)) / 2.0;
    }
    if (params.mapRadius == 0.0) params.mapRadius = params.sigma0;
    return params;
}

SomGrid::SomGrid(SomParams params, std::size_t dimension, Eigen::MatrixXd weights)
    : params_(resolveDefaults(params)), dimension_(dimension), weights_(std::move(weights)) {
    validateParams(params_);
    if (dimension_ < 1) throw UsageError("weight dimension must be positive");
    if (weights_.rows() != static_cast<Eigen::Index>(cellCount()) ||
        weights_.cols() != static_cast<Eigen::Index>(dimension_)) {
        throw DataError("weight matrix shape does not match the grid");
    }
}

std::string SomGrid::cellLabel(std::size_t cell, const std::string& prefix) const {
    const auto row = rowOf(cell) + 1;
    const auto col = colOf(cell) + 1;
    if (params_.width <= 9 && params_.height <= 9) {
        return prefix + "_" + std::to_string(row) + std::to_string(col);
    }
    return prefix + "_r" + std::to_string(row) + "c" + std::to_string(col);
}

double squaredDistance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw DataError("vector dimensions differ");
    return (a - b).squaredNorm();
}

std::size_t findBmu(const SomGrid& grid, const Eigen::VectorXd& input) {
    if (input.size() != static_cast<Eigen::Index>(grid.dimension())) {
        throw DataError("input dimension does not match the grid");
    }
    std::size_t best = 0;
    double bestDistance = (grid.weights().row(0).transpose() - input).squaredNorm();
    for (std::size_t cell = 1; cell < grid.cellCount(); ++cell) {
        const double d =
            (grid.weights().row(static_cast<Eigen::Index>(cell)).transpose() - input).squaredNorm();
        if (d < bestDistance) {
            best = cell;
            bestDistance = d;
        }
    }
    return best;
}

double timeConstant(std::size_t iterations, double mapRadius) {
    if (iterations < 1) throw UsageError("iteration count must be positive");
    if (mapRadius <= 0.0) throw UsageError("map radius must be positive");
    return static_cast<double>(iterations) / mapRadius;
}

double neighborhoodRadius(std::size_t t, double sigma0, double lambda) {
    if (sigma0 <= 0.0 || lambda <= 0.0) throw UsageError("radius schedule needs positive parameters");
    return sigma0 * std::exp(-static_cast<double>(t) / lambda);
}

double learningRate(std::size_t t, double rate0, double lambda) {
    if (rate0 <= 0.0 || lambda <= 0.0) throw UsageError("rate schedule needs positive parameters");
    return rate0 * std::exp(-static_cast<double>(t) / lambda);
}

double influence(double gridDistance, double sigma) {
    if (sigma <= 0.0) throw UsageError("influence needs a positive radius");
    return std::exp(-(gridDistance * gridDistance) / (2.0 * sigma * sigma));
}

SomGrid initGrid(const SomParams& params, std::size_t dimension) {
    const auto resolved = resolveDefaults(params);
    validateParams(resolved);
    if (dimension < 1) throw UsageError("weight dimension must be positive");
    Rng rng(resolved.seed);
    return SomGrid(resolved, dimension, initWeights(rng, resolved, dimension));
}

void updateNeighborhood(SomGrid& grid, const Eigen::VectorXd& input, std::size_t t) {
    const auto& params = grid.params();
    const double lambda = timeConstant(params.iterations, params.mapRadius);
    const double sigma = neighborhoodRadius(t, params.sigma0, lambda);
    const double rate = learningRate(t, params.rate0, lambda);
    const auto bmu = findBmu(grid, input);
    const double bmuRow = static_cast<double>(grid.rowOf(bmu));
    const double bmuCol = static_cast<double>(grid.colOf(bmu));
    for (std::size_t cell = 0; cell < grid.cellCount(); ++cell) {
        const double dr = static_cast<double>(grid.rowOf(cell)) - bmuRow;
        const double dc = static_cast<double>(grid.colOf(cell)) - bmuCol;
        const double gridDistance = std::sqrt(dr * dr + dc * dc);
        if (gridDistance > sigma) continue;
        const double theta = influence(gridDistance, sigma);
        const auto index = static_cast<Eigen::Index>(cell);
        grid.weights().row(index) +=
            theta * rate * (input.transpose() - grid.weights().row(index));
    }
}

SomGrid train(const Eigen::MatrixXd& data, const SomParams& params) {
    const auto resolved = resolveDefaults(params);
    validateParams(resolved);
    if (data.rows() < 1 || data.cols() < 1) throw DataError("training data is empty");
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) {
            const double x = data(r, c);
            if (!std::isfinite(x) || x < -1e-9 || x > 1.0 + 1e-9) {
                throw DataError("training data must be normalized to [0,1]");
            }
        }
    }
    Rng rng(resolved.seed);
    SomGrid grid(resolved, static_cast<std::size_t>(data.cols()),
                 initWeights(rng, resolved, static_cast<std::size_t>(data.cols())));
    for (std::size_t t = 0; t < resolved.iterations; ++t) {
        const auto row = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(data.rows())));
        updateNeighborhood(grid, data.row(row).transpose(), t);
    }
    return grid;
}

double quantizationError(const SomGrid& grid, const Eigen::MatrixXd& data) {
    if (data.rows() < 1) throw DataError("quantization error of empty data");
    double sum = 0.0;
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        const Eigen::VectorXd input = data.row(r).transpose();
        const auto bmu = findBmu(grid, input);
        sum += std::sqrt(
            (grid.weights().row(static_cast<Eigen::Index>(bmu)).transpose() - input).squaredNorm());
    }
    return sum / static_cast<double>(data.rows());
}

Eigen::MatrixXd featureMatrix(const Relation& relation, const std::vector<std::string>& features) {
    if (features.empty()) throw UsageError("feature list is empty");
    std::vector<std::size_t> cols;
    for (const auto& name : features) {
        const auto col = relation.columnIndex(name);
        if (relation.schema()[col].kind != AttrKind::Continuous) {
            throw DataError("feature '" + name + "' is not continuous");
        }
        cols.push_back(col);
    }
    Eigen::MatrixXd data(static_cast<Eigen::Index>(relation.rowCount()),
                         static_cast<Eigen::Index>(cols.size()));
    for (std::size_t row = 0; row < relation.rowCount(); ++row) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            const auto& value = relation.at(row, cols[i]);
            if (value.isNull()) {
                throw DataError("null in feature '" + features[i] + "' at row " +
                                std::to_string(row + 1));
            }
            data(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(i)) = value.asNumber();
        }
    }
    return data;
}

AssignResult assign(const SomGrid& grid, const Relation& relation,
                    const std::vector<std::string>& features, const ScalerParams& scaler,
                    const std::string& outAttr) {
    if (features.size() != grid.dimension()) {
        throw DataError("feature count does not match the grid dimension");
    }
    const auto raw = featureMatrix(relation, features);
    std::vector<const AttributeRange*> ranges;
    for (const auto& name : features) {
        const auto* range = scaler.find(name);
        if (range == nullptr) throw DataError("scaler has no range for feature '" + name + "'");
        ranges.push_back(range);
    }

    SomAssignment assignment;
    assignment.attrName = outAttr;
    for (std::size_t cell = 0; cell < grid.cellCount(); ++cell) {
        assignment.labels.push_back(grid.cellLabel(cell, outAttr));
    }
    assignment.cellCounts.assign(grid.cellCount(), 0);

    Eigen::VectorXd input(static_cast<Eigen::Index>(features.size()));
    std::vector<Value> column;
    for (std::size_t row = 0; row < relation.rowCount(); ++row) {
        for (std::size_t i = 0; i < features.size(); ++i) {
            input(static_cast<Eigen::Index>(i)) =
                normalizeValue(raw(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(i)),
                               *ranges[i]);
        }
        const auto bmu = findBmu(grid, input);
        assignment.cells.push_back(bmu);
        ++assignment.cellCounts[bmu];
        column.push_back(Value::text(assignment.labels[bmu]));
    }

    AttributeSchema attr{outAttr, AttrKind::Categorical, assignment.labels, false};
    return AssignResult{appendAttribute(relation, attr, column), std::move(assignment)};
}

std::string countsTable(const SomGrid& grid, const SomAssignment& assignment) {
    std::vector<std::string> cells;
    std::size_t widest = 0;
    std::size_t total = 0;
    for (std::size_t cell = 0; cell < grid.cellCount(); ++cell) {
        cells.push_back(assignment.labels[cell] + " (" +
                        std::to_string(assignment.cellCounts[cell]) + ")");
        widest = std::max(widest, cells.back().size());
        total += assignment.cellCounts[cell];
    }
    std::string out;
    for (std::size_t row = 0; row < grid.params().height; ++row) {
        for (std::size_t col = 0; col < grid.params().width; ++col) {
            const auto& text = cells[grid.cellIndex(row, col)];
            if (col > 0) out += " | ";
            out += text;
            if (col + 1 < grid.params().width) out += std::string(widest - text.size(), ' ');
        }
        out += '\n';
    }
    out += "total: " + std::to_string(total) + "\n";
    return out;
}

nlohmann::json assignmentToJson(const SomAssignment& assignment) {
    nlohmann::json doc;
    doc["attr"] = assignment.attrName;
    doc["labels"] = assignment.labels;
    doc["counts"] = assignment.cellCounts;
    doc["cells"] = assignment.cells;
    return doc;
}

nlohmann::json gridToJson(const SomGrid& grid) {
    nlohmann::json doc;
    nlohmann::json params;
    params["width"] = grid.params().width;
    params["height"] = grid.params().height;
    params["iterations"] = grid.params().iterations;
    params["sigma0"] = grid.params().sigma0;
    params["map_radius"] = grid.params().mapRadius;
    params["rate0"] = grid.params().rate0;
    params["seed"] = grid.params().seed;
    doc["params"] = std::move(params);
    doc["dimension"] = grid.dimension();
    nlohmann::json weights = nlohmann::json::array();
    for (Eigen::Index cell = 0; cell < grid.weights().rows(); ++cell) {
        nlohmann::json rowDoc = nlohmann::json::array();
        for (Eigen::Index comp = 0; comp < grid.weights().cols(); ++comp) {
            rowDoc.push_back(grid.weights()(cell, comp));
        }
        weights.push_back(std::move(rowDoc));
    }
    doc["weights"] = std::move(weights);
    return doc;
}

SomGrid gridFromJson(const nlohmann::json& doc) {
    SomParams params;
    const auto& p = doc.at("params");
    params.width = p.at("width").get<std::size_t>();
    params.height = p.at("height").get<std::size_t>();
    params.iterations = p.at("iterations").get<std::size_t>();
    params.sigma0 = p.at("sigma0").get<double>();
    params.mapRadius = p.at("map_radius").get<double>();
    params.rate0 = p.at("rate0").get<double>();
    params.seed = p.at("seed").get<std::uint64_t>();
    const auto dimension = doc.at("dimension").get<std::size_t>();
    const auto& weights = doc.at("weights");
    Eigen::MatrixXd matrix(static_cast<Eigen::Index>(weights.size()),
                           static_cast<Eigen::Index>(dimension));
    for (std::size_t cell = 0; cell < weights.size(); ++cell) {
        const auto& rowDoc = weights.at(cell);
        if (rowDoc.size() != dimension) throw DataError("weight row has wrong dimension");
        for (std::size_t comp = 0; comp < dimension; ++comp) {
            matrix(static_cast<Eigen::Index>(cell), static_cast<Eigen::Index>(comp)) =
                rowDoc.at(comp).get<double>();
        }
    }
    return SomGrid(params, dimension, std::move(matrix));
}

}
