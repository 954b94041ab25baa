#pragma once

#include "windfault/core.hpp"

#include <Eigen/Dense>

#include <optional>

namespace windfault {

enum class Activation { logistic, tanh_ };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& s);

struct MlpArchitecture {
    std::size_t n_inputs = 1;
    std::size_t n_hidden = 10;
    Activation hidden_activation = Activation::tanh_;
    // output activation is always logistic
};

enum class ClassWeighting { none, inverse_frequency };

struct TrainingConfig {
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::size_t max_epochs = 500;
    std::size_t patience = 20;
    std::size_t restarts = 3;
    std::uint64_t seed = 1;
    ClassWeighting class_weighting = ClassWeighting::inverse_frequency;
    double decision_threshold = 0.5;
    void validate() const;
};

struct TrainingSummary {
    std::size_t epochs_run = 0;
    double best_loss = 0.0;  // validation loss, or training loss without a holdout
    std::size_t restart_index = 0;
    std::vector<double> train_loss_history;  // per-epoch, winning restart only
};

struct TrainedModel {
    MlpArchitecture arch;
    Eigen::MatrixXd w_hidden;   // n_hidden x n_inputs
    Eigen::VectorXd b_hidden;   // n_hidden
    Eigen::RowVectorXd w_out;   // 1 x n_hidden
    double b_out = 0.0;
    std::vector<std::string> feature_ids;
    Eigen::VectorXd feat_mean;  // per-feature training mean
    Eigen::VectorXd feat_std;   // per-feature training std (1 for constants)
    double decision_threshold = 0.5;
    TrainingSummary summary;
};

struct Holdout {
    Eigen::MatrixXd X;  // rows x features, unstandardized
    std::vector<int> y;
};

// Dense design matrix extracted from a FeatureMatrix; rows containing a
// missing cell among the kept columns are dropped.
struct DenseView {
    Eigen::MatrixXd X;
    std::vector<int> y;
    std::vector<std::size_t> row_index;  // original row of each kept row
    std::vector<std::string> feature_ids;
};
DenseView dense_view(const FeatureMatrix& features, const std::vector<int>& labels,
                     const std::vector<std::string>& subset);

// Class-weighted BCE minimized by full-batch gradient descent with momentum;
// `restarts` seeded initializations, early stopping on the holdout (or
// training) loss after `patience` stagnant epochs.
TrainedModel train(const Eigen::MatrixXd& X, const std::vector<int>& y,
                   const std::vector<std::string>& feature_ids, const MlpArchitecture& arch,
                   const TrainingConfig& cfg, const std::optional<Holdout>& validation = {});

struct Prediction {
    std::vector<double> scores;  // logistic outputs in (0,1)
    std::vector<int> labels;     // score >= threshold -> 1
};
Prediction predict(const TrainedModel& model, const Eigen::MatrixXd& X,
                   const std::vector<std::string>& feature_ids);

// Loss and exact analytic gradient in a flat parameter vector laid out as
// [w_hidden row-major | b_hidden | w_out | b_out]; exposed for the
// finite-difference check.
std::pair<double, Eigen::VectorXd> loss_and_gradient(const TrainedModel& model,
                                                     const Eigen::MatrixXd& X_std,
                                                     const std::vector<int>& y,
                                                     const Eigen::VectorXd& sample_weights);

std::size_t parameter_count(const MlpArchitecture& arch);
Eigen::VectorXd flatten_parameters(const TrainedModel& model);
void unflatten_parameters(TrainedModel& model, const Eigen::VectorXd& theta);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace windfault
