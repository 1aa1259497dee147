// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sentinel::anomaly {

inline constexpr int kAnomalyFormatVersion = 1;

// ---------------------------------------------------------------------------
// PCA

struct PcaModel {
    Eigen::VectorXd mean;                // d
    Eigen::MatrixXd components;          // k x d, orthonormal rows
    Eigen::VectorXd explained_variance;  // k, non-increasing
    std::vector<std::string> feature_schema;  // optional column names

    [[nodiscard]] Eigen::Index input_dim() const noexcept { return mean.size(); }
    [[nodiscard]] Eigen::Index k() const noexcept { return components.rows(); }
};

//! Top-k principal axes from the SVD of the centered data (rows are samples). Each
//! component is flipped so its largest-magnitude entry is positive.
//! Throws DimensionError when k > d, k < 1 or fewer than 2 rows are given.
[[nodiscard]] PcaModel pca_fit(const Eigen::MatrixXd& rows, Eigen::Index k);

//! (row - mean) * components^T. Throws DimensionError on a length mismatch.
[[nodiscard]] Eigen::VectorXd pca_project(const PcaModel& model, const Eigen::VectorXd& row);
//! Projects every row of a matrix.
[[nodiscard]] Eigen::MatrixXd pca_project(const PcaModel& model, const Eigen::MatrixXd& rows);
//! mean + coords * components.
[[nodiscard]] Eigen::VectorXd pca_inverse(const PcaModel& model, const Eigen::VectorXd& coords);

// ---------------------------------------------------------------------------
// Autoencoder

//! Fully connected network; tanh on every hidden layer, linear output. Inputs are
//! standardized with (x - input_mean) / input_scale before the first layer.
struct AutoencoderModel {
    std::vector<int> layer_dims;           // e.g. {d, h, z, h, d}
    std::vector<Eigen::MatrixXd> weights;  // weights[l] is dims[l+1] x dims[l]
    std::vector<Eigen::VectorXd> biases;
    std::string activation{"tanh"};
    Eigen::VectorXd input_mean;
    Eigen::VectorXd input_scale;
    std::vector<std::string> feature_schema;

    [[nodiscard]] int input_dim() const noexcept { return layer_dims.empty() ? 0 : layer_dims.front(); }
    [[nodiscard]] std::size_t bottleneck_layer() const noexcept { return layer_dims.size() / 2; }
    [[nodiscard]] Eigen::Index parameter_count() const;
};

struct FitConfig {
    int epochs{200};
    int batch_size{32};
    double learning_rate{1e-3};
    std::uint64_t rng_seed{0};
    bool standardize{true};
    std::vector<int> hidden_dims;  // encoder side, e.g. {h, z}; empty selects {max(2,d/2), max(1,d/4)}

    void validate() const;
};

struct FitLog {
    std::vector<double> epoch_loss;  // full-data MSE before training, then after each epoch
};

//! Default symmetric layout {d, max(2, d/2), max(1, d/4), max(2, d/2), d}.
[[nodiscard]] std::vector<int> default_layer_dims(int d);

//! Glorot-uniform weights, zero biases, identity standardization.
[[nodiscard]] AutoencoderModel make_autoencoder(std::vector<int> layer_dims, std::uint64_t seed);

//! Mini-batch Adam on the mean squared reconstruction error. The rows are assumed benign;
//! standardization statistics come from them alone. Throws DimensionError when d < 2 and
//! DivergenceError when the loss stops being finite.
[[nodiscard]] AutoencoderModel ae_fit(const Eigen::MatrixXd& rows, const FitConfig& cfg, FitLog* log = nullptr);

//! Mean squared error between the standardized row and its reconstruction.
[[nodiscard]] double ae_score(const AutoencoderModel& model, const Eigen::VectorXd& row);
[[nodiscard]] Eigen::VectorXd ae_score(const AutoencoderModel& model, const Eigen::MatrixXd& rows);

//! Bottleneck activations of a row.
[[nodiscard]] Eigen::VectorXd ae_encode(const AutoencoderModel& model, const Eigen::VectorXd& row);
[[nodiscard]] Eigen::MatrixXd ae_encode(const AutoencoderModel& model, const Eigen::MatrixXd& rows);

//! Reconstruction in standardized units.
[[nodiscard]] Eigen::VectorXd ae_reconstruct(const AutoencoderModel& model, const Eigen::VectorXd& standardized_row);

//! Loss and its gradient on already-standardized rows (samples are rows), flattened in
//! flatten_parameters() order.
struct LossAndGradient {
    double loss{0.0};
    Eigen::VectorXd gradient;
};
[[nodiscard]] LossAndGradient ae_loss_and_gradient(const AutoencoderModel& model, const Eigen::MatrixXd& standardized_rows);
[[nodiscard]] double ae_loss(const AutoencoderModel& model, const Eigen::MatrixXd& standardized_rows);

//! Layer by layer: weights (column-major) then bias.
[[nodiscard]] Eigen::VectorXd flatten_parameters(const AutoencoderModel& model);
void set_parameters(AutoencoderModel& model, const Eigen::VectorXd& flat);

[[nodiscard]] std::string to_json(const PcaModel& model);
[[nodiscard]] std::string to_json(const AutoencoderModel& model);
[[nodiscard]] PcaModel pca_from_json(std::string_view text);
[[nodiscard]] AutoencoderModel autoencoder_from_json(std::string_view text);

void save_pca(const PcaModel& model, const std::filesystem::path& path);
[[nodiscard]] PcaModel load_pca(const std::filesystem::path& path);
void save_autoencoder(const AutoencoderModel& model, const std::filesystem::path& path);
[[nodiscard]] AutoencoderModel load_autoencoder(const std::filesystem::path& path);

//! "c0,c1,...,label" rows; label column left empty when labels is empty.
[[nodiscard]] std::string projection_csv(const Eigen::MatrixXd& coords, std::span<const int> labels);

}  // namespace sentinel::anomaly
