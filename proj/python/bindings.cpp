// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sentinel/anomaly.hpp>
#include <sentinel/bayesnet.hpp>
#include <sentinel/calldata.hpp>
#include <sentinel/errors.hpp>
#include <sentinel/evm_disasm.hpp>
#include <sentinel/features.hpp>
#include <sentinel/gbdt.hpp>
#include <sentinel/ingest.hpp>
#include <sentinel/metrics.hpp>

namespace py = pybind11;
using namespace sentinel;

namespace {

using Matrix = py::array_t<double, py::array::c_style | py::array::forcecast>;

DenseDataset dense_from(const Matrix& x, const std::vector<std::string>& schema, const std::vector<int>& labels) {
    if (x.ndim() != 2) throw DimensionError("expected a 2-D array");
    std::vector<std::string> names = schema;
    if (names.empty()) {
        for (py::ssize_t c = 0; c < x.shape(1); ++c) names.push_back("f" + std::to_string(c));
    }
    if (static_cast<py::ssize_t>(names.size()) != x.shape(1)) throw DimensionError("schema length differs from the column count");
    DenseDataset d;
    d.schema = std::move(names);
    d.data.assign(x.data(), x.data() + x.size());
    d.labels = labels;
    return d;
}

std::vector<double> predict(const gbdt::GbdtModel& model, const Matrix& x) {
    if (x.ndim() != 2 || x.shape(1) != static_cast<py::ssize_t>(model.feature_schema.size())) {
        throw DimensionError("expected " + std::to_string(model.feature_schema.size()) + " columns");
    }
    return gbdt::predict_proba(model, dense_from(x, model.feature_schema, {}));
}

bayesnet::Dag learn(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& x,
                    const std::vector<std::string>& names, int max_parents, std::uint64_t seed) {
    if (x.ndim() != 2 || x.shape(1) != static_cast<py::ssize_t>(names.size())) {
        throw DimensionError("expected one name per column");
    }
    bayesnet::BinaryDataset data{names, {x.data(), x.data() + x.size()}};
    bayesnet::StructureConfig cfg;
    cfg.max_parents = max_parents;
    cfg.rng_seed = seed;
    return bayesnet::learn_structure(data, cfg);
}

}  // namespace

PYBIND11_MODULE(_native, m) {
    m.doc() = "Native core of the sentinel transaction analysis toolkit";

    static py::exception<Error> base_error(m, "SentinelError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(base_error.ptr(), (e.name() + ": " + e.what()).c_str());
        }
    });

    // evm
    m.def("disassemble", [](const std::string& hex) { return evm::format_listing(evm::disassemble(from_hex(hex))); },
          py::arg("bytecode_hex"), "Instruction listing, one line per instruction");
    m.def("normalize", [](const std::string& hex, std::size_t max_len) {
              evm::NormalizeConfig cfg;
              cfg.max_len = max_len;
              return evm::normalize_sequence(evm::disassemble(from_hex(hex)), cfg);
          },
          py::arg("bytecode_hex"), py::arg("max_len") = 600);
    m.def("roundtrip", [](const py::bytes& code) {
              const std::string s = code;
              const Bytes in(s.begin(), s.end());
              const Bytes out = evm::reserialize(evm::disassemble(in));
              return py::bytes(reinterpret_cast<const char*>(out.data()), out.size());
          },
          py::arg("code"));
    m.def("opcode_table_csv", &evm::opcode_table_csv);

    // calldata
    py::class_<calldata::SignatureDirectory>(m, "SignatureDirectory")
        .def(py::init<>())
        .def("add", [](calldata::SignatureDirectory& d, const std::string& sel, const std::string& sig, const std::string& cls) {
                 calldata::SignatureClass c = calldata::SignatureClass::unknown;
                 if (cls == "benign") c = calldata::SignatureClass::benign;
                 else if (cls == "malicious") c = calldata::SignatureClass::malicious;
                 else if (cls != "unknown") throw DirectoryParseError("unknown class '" + cls + "'");
                 d.add(sel, sig, c);
             })
        .def_property_readonly("hex_dic", &calldata::SignatureDirectory::hex_dic)
        .def_property_readonly("mal_dic", &calldata::SignatureDirectory::mal_dic)
        .def_property_readonly("benign_dic", &calldata::SignatureDirectory::benign_dic)
        .def_property_readonly("collisions", &calldata::SignatureDirectory::collisions);
    m.def("load_directory", &calldata::load_directory, py::arg("path"));
    m.def("parse_directory", [](const std::string& text) { return calldata::parse_directory(text); }, py::arg("text"));
    m.def("octet_features", [](const std::string& input, const calldata::SignatureDirectory& dir) {
              const auto f = calldata::octet_features(calldata::CalldataInput::parse(input), dir);
              py::dict d;
              d["n_octets"] = f.n_octets;
              d["valid_octet"] = f.valid_octet;
              d["benign_octet"] = f.benign_octet;
              d["mal_octet"] = f.mal_octet;
              return d;
          },
          py::arg("input"), py::arg("directory"));
    m.def("malicious_only_selectors", [](const std::vector<std::pair<std::string, int>>& rows) {
              std::vector<calldata::LabeledCalldata> parsed;
              for (const auto& [input, label] : rows) parsed.push_back({calldata::CalldataInput::parse(input), label});
              return calldata::signature_stats(parsed, {}).malicious_only_selectors;
          },
          py::arg("rows"));

    // features
    m.def("feature_schema", &features::feature_schema);
    m.def("is_gas_feature", [](const std::string& n) { return features::is_gas_feature(n); });
    m.def("records_to_features", [](const std::filesystem::path& records, const std::optional<std::filesystem::path>& directory) {
              const auto rows = ingest::load_records(records);
              const auto dir = directory ? calldata::load_directory(*directory) : calldata::SignatureDirectory{};
              const auto fvs = features::build_dataset(rows, dir);
              const auto dense = to_dense(fvs, true);
              Matrix x({dense.rows(), dense.cols()});
              std::copy(dense.data.begin(), dense.data.end(), x.mutable_data());
              return py::make_tuple(x, dense.labels, dense.schema);
          },
          py::arg("records_path"), py::arg("directory_path") = py::none(),
          "Feature matrix, labels and column names for a records.jsonl file");

    // gbdt
    py::class_<gbdt::GbdtModel>(m, "GbdtModel")
        .def_readonly("feature_schema", &gbdt::GbdtModel::feature_schema)
        .def_readonly("base_score", &gbdt::GbdtModel::base_score)
        .def_property_readonly("n_trees", [](const gbdt::GbdtModel& g) { return g.trees.size(); })
        .def("predict_proba", &predict, py::arg("x"))
        .def("feature_importance", [](const gbdt::GbdtModel& g) { return gbdt::feature_importance(g); })
        .def("to_json", [](const gbdt::GbdtModel& g) { return gbdt::to_json(g); })
        .def("save", [](const gbdt::GbdtModel& g, const std::filesystem::path& p) { gbdt::save_model(g, p); });
    m.def("train_gbdt",
          [](const Matrix& x, const std::vector<int>& y, const std::vector<std::string>& schema, int n_trees, int max_depth,
             double learning_rate, std::optional<double> positive_class_weight, std::uint64_t seed, double row_subsample) {
              gbdt::TrainConfig cfg;
              cfg.n_trees = n_trees;
              cfg.max_depth = max_depth;
              cfg.learning_rate = learning_rate;
              cfg.positive_class_weight = positive_class_weight;
              cfg.rng_seed = seed;
              cfg.row_subsample = row_subsample;
              return gbdt::train(dense_from(x, schema, y), cfg);
          },
          py::arg("x"), py::arg("y"), py::arg("schema") = std::vector<std::string>{}, py::arg("n_trees") = 200,
          py::arg("max_depth") = 4, py::arg("learning_rate") = 0.1, py::arg("positive_class_weight") = py::none(),
          py::arg("seed") = 0, py::arg("row_subsample") = 1.0);
    m.def("load_gbdt", &gbdt::load_model, py::arg("path"));
    m.def("gbdt_from_json", [](const std::string& text) { return gbdt::from_json(text); }, py::arg("text"));

    // metrics
    m.def("auc", [](std::vector<double> scores, std::vector<int> labels) { return metrics::auc({std::move(scores), std::move(labels)}); },
          py::arg("scores"), py::arg("labels"));
    m.def("roc_curve", [](std::vector<double> scores, std::vector<int> labels) {
              std::vector<std::tuple<double, double, double>> out;
              for (const auto& p : metrics::roc_curve({std::move(scores), std::move(labels)})) out.emplace_back(p.threshold, p.fpr, p.tpr);
              return out;
          },
          py::arg("scores"), py::arg("labels"), "(threshold, fpr, tpr) points");

    // bayesnet
    m.def("learn_structure",
          [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& x, const std::vector<std::string>& names,
             int max_parents, std::uint64_t seed) { return learn(x, names, max_parents, seed).arcs(); },
          py::arg("x"), py::arg("names"), py::arg("max_parents") = 3, py::arg("seed") = 0, "Learned arcs as (parent, child) pairs");
    m.def("bic_score",
          [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& x, const std::vector<std::string>& names,
             const std::vector<std::pair<std::string, std::string>>& arcs) {
              bayesnet::BinaryDataset data{names, {x.data(), x.data() + x.size()}};
              bayesnet::Dag dag{names};
              for (const auto& [p, c] : arcs) dag.add_arc(p, c);
              return bayesnet::bic_score(data, dag);
          },
          py::arg("x"), py::arg("names"), py::arg("arcs"));

    // anomaly
    py::class_<anomaly::PcaModel>(m, "PcaModel")
        .def_readonly("mean", &anomaly::PcaModel::mean)
        .def_readonly("components", &anomaly::PcaModel::components)
        .def_readonly("explained_variance", &anomaly::PcaModel::explained_variance)
        .def("project", [](const anomaly::PcaModel& p, const Eigen::MatrixXd& x) { return anomaly::pca_project(p, x); }, py::arg("x"));
    m.def("pca_fit", &anomaly::pca_fit, py::arg("x"), py::arg("k"));

    py::class_<anomaly::AutoencoderModel>(m, "Autoencoder")
        .def_readonly("layer_dims", &anomaly::AutoencoderModel::layer_dims)
        .def("score", [](const anomaly::AutoencoderModel& a, const Eigen::MatrixXd& x) { return anomaly::ae_score(a, x); }, py::arg("x"))
        .def("encode", [](const anomaly::AutoencoderModel& a, const Eigen::MatrixXd& x) { return anomaly::ae_encode(a, x); }, py::arg("x"))
        .def("to_json", [](const anomaly::AutoencoderModel& a) { return anomaly::to_json(a); });
    m.def("fit_autoencoder",
          [](const Eigen::MatrixXd& x, std::vector<int> hidden_dims, int epochs, int batch_size, double learning_rate, std::uint64_t seed) {
              anomaly::FitConfig cfg;
              cfg.hidden_dims = std::move(hidden_dims);
              cfg.epochs = epochs;
              cfg.batch_size = batch_size;
              cfg.learning_rate = learning_rate;
              cfg.rng_seed = seed;
              return anomaly::ae_fit(x, cfg);
          },
          py::arg("x"), py::arg("hidden_dims") = std::vector<int>{}, py::arg("epochs") = 200, py::arg("batch_size") = 32,
          py::arg("learning_rate") = 1e-3, py::arg("seed") = 0);
}
