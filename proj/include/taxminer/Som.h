#ifndef TAXMINER_SOM_H
#define TAXMINER_SOM_H

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "taxminer/Relation.h"

namespace taxminer {

struct SomParams {
    std::size_t width = 2;
    std::size_t height = 2;
    std::size_t iterations = 500;
    double sigma0 = 0.0;     // 0 resolves to max(width, height) / 2
    double mapRadius = 0.0;  // 0 resolves to sigma0
    double rate0 = 0.1;
    std::uint64_t seed = 0;
};

SomParams resolveDefaults(SomParams params);

// Rectangular map; cell index is row-major, weights one row per cell.
class SomGrid {
public:
    SomGrid(SomParams params, std::size_t dimension, Eigen::MatrixXd weights);

    const SomParams& params() const { return params_; }
    std::size_t dimension() const { return dimension_; }
    std::size_t cellCount() const { return params_.width * params_.height; }
    const Eigen::MatrixXd& weights() const { return weights_; }
    Eigen::MatrixXd& weights() { return weights_; }

    std::size_t cellIndex(std::size_t row, std::size_t col) const { return row * params_.width + col; }
    std::size_t rowOf(std::size_t cell) const { return cell / params_.width; }
    std::size_t colOf(std::size_t cell) const { return cell % params_.width; }
    std::string cellLabel(std::size_t cell, const std::string& prefix) const;

private:
    SomParams params_;
    std::size_t dimension_;
    Eigen::MatrixXd weights_;
};

double squaredDistance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Smallest squared distance wins; ties resolve to the lowest row-major index.
std::size_t findBmu(const SomGrid& grid, const Eigen::VectorXd& input);

double timeConstant(std::size_t iterations, double mapRadius);
double neighborhoodRadius(std::size_t t, double sigma0, double lambda);
double learningRate(std::size_t t, double rate0, double lambda);
double influence(double gridDistance, double sigma);

SomGrid initGrid(const SomParams& params, std::size_t dimension);

// One training step: find the BMU for the input and pull every cell within
// the shrinking radius toward it, scaled by influence and learning rate.
void updateNeighborhood(SomGrid& grid, const Eigen::VectorXd& input, std::size_t t);

// Full loop over `iterations` independent row draws. Inputs must be
// pre-normalized; values outside [0,1] by more than 1e-9 are rejected.
SomGrid train(const Eigen::MatrixXd& data, const SomParams& params);

double quantizationError(const SomGrid& grid, const Eigen::MatrixXd& data);

struct SomAssignment {
    std::string attrName;
    std::vector<std::string> labels;      // one per cell, row-major
    std::vector<std::size_t> cells;       // BMU per record
    std::vector<std::size_t> cellCounts;  // records per cell, sums to the record count
};

struct AssignResult {
    Relation relation;
    SomAssignment assignment;
};

// Normalizes the feature columns with the stored scaler, finds each record's
// BMU and appends the cell label as a new categorical attribute.
AssignResult assign(const SomGrid& grid, const Relation& relation,
                    const std::vector<std::string>& features, const ScalerParams& scaler,
                    const std::string& outAttr = "CSOM");

Eigen::MatrixXd featureMatrix(const Relation& relation, const std::vector<std::string>& features);

std::string countsTable(const SomGrid& grid, const SomAssignment& assignment);
nlohmann::json assignmentToJson(const SomAssignment& assignment);
nlohmann::json gridToJson(const SomGrid& grid);
SomGrid gridFromJson(const nlohmann::json& doc);

}

#endif
