#include "deltaiss/io.hpp"

#include "deltaiss/error.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace deltaiss::io {

using nlohmann::json;

namespace {

constexpr const char* kModelFormat = "deltaiss-model/1";
constexpr const char* kCertificateFormat = "deltaiss-certificate/1";
constexpr const char* kWitnessFormat = "deltaiss-witness/1";
constexpr const char* kArchitectureFormat = "deltaiss-architecture/1";
constexpr const char* kGainsFormat = "deltaiss-gains/1";

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(ErrorKind::Io, "cannot open file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Io, path + ": " + e.what());
    }
    if (!j.is_object())
        fail(ErrorKind::Io, path + ": top-level value must be an object");
    return j;
}

void write_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out)
        fail(ErrorKind::Io, "cannot write file: " + path);
    out << j.dump(2) << '\n';
    if (!out)
        fail(ErrorKind::Io, "write failed: " + path);
}

void require_format(const json& j, const std::string& path, const char* format) {
    if (!j.contains("format") || !j.at("format").is_string() || j.at("format") != format)
        fail(ErrorKind::Io, path + ": missing or unsupported \"format\" (expected " +
                                std::string(format) + ")");
}

void reject_unknown_keys(const json& j, const std::string& where,
                         const std::set<std::string>& allowed) {
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            fail(ErrorKind::Io, where + ": unknown key \"" + item.key() + "\"");
}

double number_at(const json& j, const std::string& where) {
    if (!j.is_number())
        fail(ErrorKind::Io, where + ": expected a number");
    return j.get<double>();
}

DenseMatrix matrix_field(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        fail(ErrorKind::Io, where + ": expected a non-empty array of rows");
    if (!j.front().is_array())
        fail(ErrorKind::Io, where + ": expected nested arrays (rows of numbers)");
    const std::size_t rows = j.size();
    const std::size_t cols = j.front().size();
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = j.at(i);
        if (!row.is_array() || row.size() != cols)
            fail(ErrorKind::Io, where + ": row " + std::to_string(i) + " has inconsistent width");
        for (std::size_t k = 0; k < cols; ++k)
            m(i, k) = number_at(row.at(k), where + "[" + std::to_string(i) + "][" +
                                               std::to_string(k) + "]");
    }
    if (!m.is_finite())
        fail(ErrorKind::Io, where + ": non-finite entry");
    return m;
}

std::vector<double> vector_field(const json& j, const std::string& where) {
    if (!j.is_array())
        fail(ErrorKind::Io, where + ": expected an array of numbers");
    std::vector<double> v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        v[i] = number_at(j.at(i), where + "[" + std::to_string(i) + "]");
    return v;
}

models::Activation activation_field(const json& j, const std::string& where) {
    if (!j.is_object())
        fail(ErrorKind::Io, where + ": expected an activation object");
    reject_unknown_keys(j, where, {"kind", "lipschitz", "bounded"});
    if (!j.contains("kind") || !j.at("kind").is_string())
        fail(ErrorKind::Io, where + ": activation needs a string \"kind\"");
    const std::string kind = j.at("kind");

    models::Activation act;
    if (kind == "identity") act = models::Activation::identity();
    else if (kind == "tanh") act = models::Activation::tanh();
    else if (kind == "sigmoid") act = models::Activation::sigmoid();
    else if (kind == "relu") act = models::Activation::relu();
    else
        fail(ErrorKind::Io, where + ": unsupported activation kind \"" + kind +
                                "\" (custom activations cannot come from files)");

    if (j.contains("lipschitz")) {
        if (kind == "identity")
            fail(ErrorKind::Io, where + ": identity activation has a fixed Lipschitz constant");
        act.lipschitz = number_at(j.at("lipschitz"), where + ".lipschitz");
        if (!(act.lipschitz > 0.0))
            fail(ErrorKind::Io, where + ": Lipschitz constant must be positive");
    }
    if (j.contains("bounded")) {
        if (!j.at("bounded").is_boolean())
            fail(ErrorKind::Io, where + ".bounded: expected a boolean");
        const bool b = j.at("bounded").get<bool>();
        if (b != act.bounded)
            fail(ErrorKind::Io, where + ": boundedness contradicts the activation kind");
    }
    return act;
}

std::vector<models::Activation> activation_list(const json& j, const std::string& where) {
    if (!j.is_array())
        fail(ErrorKind::Io, where + ": expected an array of activations");
    std::vector<models::Activation> acts;
    for (std::size_t i = 0; i < j.size(); ++i)
        acts.push_back(activation_field(j.at(i), where + "[" + std::to_string(i) + "]"));
    return acts;
}

json activation_json(const models::Activation& act) {
    json j;
    j["kind"] = models::to_string(act.kind);
    j["lipschitz"] = act.lipschitz;
    j["bounded"] = act.bounded;
    return j;
}

json matrix_json(const DenseMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_json(const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(x);
    return arr;
}

ModelFile model_from_json(const json& j, const std::string& path) {
    if (!j.contains("kind") || !j.at("kind").is_string())
        fail(ErrorKind::Io, path + ": missing string \"kind\"");
    const std::string kind = j.at("kind");
    ModelFile file;

    if (kind == "generic") {
        reject_unknown_keys(j, path, {"format", "kind", "a", "b", "c", "d", "activations"});
        for (const char* key : {"a", "b", "c", "d", "activations"})
            if (!j.contains(key))
                fail(ErrorKind::Io, path + ": generic model needs \"" + std::string(key) + "\"");
        models::GenericRnn g;
        g.a = matrix_field(j.at("a"), path + ".a");
        g.b = matrix_field(j.at("b"), path + ".b");
        g.c = matrix_field(j.at("c"), path + ".c");
        g.d = matrix_field(j.at("d"), path + ".d");
        g.activations = activation_list(j.at("activations"), path + ".activations");
        file.kind = ModelFile::Kind::Generic;
        file.model = std::move(g);
    } else if (kind == "esn") {
        reject_unknown_keys(j, path, {"format", "kind", "w_x", "w_u", "w_y", "w_out1", "w_out2",
                                      "activation", "activations"});
        for (const char* key : {"w_x", "w_u", "w_y", "w_out1", "w_out2"})
            if (!j.contains(key))
                fail(ErrorKind::Io, path + ": esn model needs \"" + std::string(key) + "\"");
        models::Esn e;
        e.w_x = matrix_field(j.at("w_x"), path + ".w_x");
        e.w_u = matrix_field(j.at("w_u"), path + ".w_u");
        e.w_y = matrix_field(j.at("w_y"), path + ".w_y");
        e.w_out1 = matrix_field(j.at("w_out1"), path + ".w_out1");
        e.w_out2 = matrix_field(j.at("w_out2"), path + ".w_out2");
        if (j.contains("activation"))
            e.reservoir_activation = activation_field(j.at("activation"), path + ".activation");
        if (j.contains("activations"))
            e.coordinate_activations = activation_list(j.at("activations"), path + ".activations");
        file.kind = ModelFile::Kind::Esn;
        file.model = std::move(e);
    } else if (kind == "nnarx") {
        reject_unknown_keys(j, path, {"format", "kind", "w_0", "b_0", "w_phi", "w_u", "b", "lags",
                                      "activation"});
        for (const char* key : {"w_0", "b_0", "w_phi", "w_u", "b", "lags"})
            if (!j.contains(key))
                fail(ErrorKind::Io, path + ": nnarx model needs \"" + std::string(key) + "\"");
        models::ShallowNnarx nx;
        nx.w_0 = matrix_field(j.at("w_0"), path + ".w_0");
        nx.b_0 = DenseMatrix::column(vector_field(j.at("b_0"), path + ".b_0"));
        nx.w_phi = matrix_field(j.at("w_phi"), path + ".w_phi");
        nx.w_u = matrix_field(j.at("w_u"), path + ".w_u");
        nx.b = DenseMatrix::column(vector_field(j.at("b"), path + ".b"));
        if (!j.at("lags").is_number_unsigned() || j.at("lags").get<std::uint64_t>() < 1)
            fail(ErrorKind::Io, path + ".lags: expected a positive integer");
        nx.lag_count = j.at("lags").get<std::size_t>();
        if (j.contains("activation"))
            nx.hidden_activation = activation_field(j.at("activation"), path + ".activation");
        file.kind = ModelFile::Kind::Nnarx;
        file.model = std::move(nx);
    } else if (kind == "hu") {
        reject_unknown_keys(j, path, {"format", "kind", "e", "o", "a_hat", "s", "activations"});
        for (const char* key : {"e", "o", "a_hat", "s", "activations"})
            if (!j.contains(key))
                fail(ErrorKind::Io, path + ": hu model needs \"" + std::string(key) + "\"");
        models::HuRnn h;
        h.e_diag = vector_field(j.at("e"), path + ".e");
        h.o_diag = vector_field(j.at("o"), path + ".o");
        h.a_hat = matrix_field(j.at("a_hat"), path + ".a_hat");
        h.s = vector_field(j.at("s"), path + ".s");
        h.activations = activation_list(j.at("activations"), path + ".activations");
        file.kind = ModelFile::Kind::Hu;
        file.model = std::move(h);
    } else {
        fail(ErrorKind::Io, path + ": unsupported model kind \"" + kind + "\"");
    }

    // Every loadable model must convert and validate cleanly.
    const auto issues = models::validate(to_generic(file));
    if (!issues.empty())
        fail(ErrorKind::Io, path + ": model fails validation: " + issues.front());
    return file;
}

json model_to_json(const ModelFile& file) {
    json j;
    j["format"] = kModelFormat;
    switch (file.kind) {
    case ModelFile::Kind::Generic: {
        const auto& g = file.generic();
        j["kind"] = "generic";
        j["a"] = matrix_json(g.a);
        j["b"] = matrix_json(g.b);
        j["c"] = matrix_json(g.c);
        j["d"] = matrix_json(g.d);
        json acts = json::array();
        for (const auto& a : g.activations) acts.push_back(activation_json(a));
        j["activations"] = std::move(acts);
        break;
    }
    case ModelFile::Kind::Esn: {
        const auto& e = file.esn();
        j["kind"] = "esn";
        j["w_x"] = matrix_json(e.w_x);
        j["w_u"] = matrix_json(e.w_u);
        j["w_y"] = matrix_json(e.w_y);
        j["w_out1"] = matrix_json(e.w_out1);
        j["w_out2"] = matrix_json(e.w_out2);
        j["activation"] = activation_json(e.reservoir_activation);
        if (!e.coordinate_activations.empty()) {
            json acts = json::array();
            for (const auto& a : e.coordinate_activations) acts.push_back(activation_json(a));
            j["activations"] = std::move(acts);
        }
        break;
    }
    case ModelFile::Kind::Nnarx: {
        const auto& nx = file.nnarx();
        j["kind"] = "nnarx";
        j["w_0"] = matrix_json(nx.w_0);
        j["b_0"] = vector_json(nx.b_0.entries());
        j["w_phi"] = matrix_json(nx.w_phi);
        j["w_u"] = matrix_json(nx.w_u);
        j["b"] = vector_json(nx.b.entries());
        j["lags"] = nx.lag_count;
        j["activation"] = activation_json(nx.hidden_activation);
        break;
    }
    case ModelFile::Kind::Hu: {
        const auto& h = file.hu();
        j["kind"] = "hu";
        j["e"] = vector_json(h.e_diag);
        j["o"] = vector_json(h.o_diag);
        j["a_hat"] = matrix_json(h.a_hat);
        j["s"] = vector_json(h.s);
        json acts = json::array();
        for (const auto& a : h.activations) acts.push_back(activation_json(a));
        j["activations"] = std::move(acts);
        break;
    }
    }
    return j;
}

} // namespace

ModelFile load_model(const std::string& path) {
    const json j = parse_file(path);
    require_format(j, path, kModelFormat);
    return model_from_json(j, path);
}

void save_model(const std::string& path, const ModelFile& file) {
    write_file(path, model_to_json(file));
}

models::GenericRnn to_generic(const ModelFile& file) {
    switch (file.kind) {
    case ModelFile::Kind::Generic: return file.generic();
    case ModelFile::Kind::Esn: return models::esn_to_generic(file.esn());
    case ModelFile::Kind::Nnarx: return models::nnarx_to_generic(file.nnarx());
    case ModelFile::Kind::Hu: return models::hu_to_generic(file.hu());
    }
    fail(ErrorKind::InvalidInput, "unreachable model kind");
}

std::string model_hash(const ModelFile& file) {
    const std::string canonical = model_to_json(file).dump();
    std::uint64_t h = 1469598103934665603ULL; // FNV-1a 64
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

CertificateFile load_certificate(const std::string& path) {
    const json j = parse_file(path);
    require_format(j, path, kCertificateFormat);
    reject_unknown_keys(j, path, {"format", "toolkit_version", "model_hash", "dim", "p_lower",
                                  "margin", "lyapunov_gap"});
    for (const char* key : {"model_hash", "dim", "p_lower", "margin", "lyapunov_gap"})
        if (!j.contains(key))
            fail(ErrorKind::Io, path + ": certificate needs \"" + std::string(key) + "\"");

    CertificateFile file;
    file.model_hash = j.at("model_hash").get<std::string>();
    const std::size_t n = j.at("dim").get<std::size_t>();
    const std::vector<double> lower = vector_field(j.at("p_lower"), path + ".p_lower");
    if (lower.size() != n * (n + 1) / 2)
        fail(ErrorKind::Io, path + ": p_lower length does not match dim");
    file.p = SymmetricMatrix(n);
    file.p.packed_lower() = lower;
    file.margin = number_at(j.at("margin"), path + ".margin");
    file.lyapunov_gap = number_at(j.at("lyapunov_gap"), path + ".lyapunov_gap");
    if (j.contains("toolkit_version"))
        file.toolkit_version = j.at("toolkit_version").get<std::string>();
    return file;
}

void save_certificate(const std::string& path, const CertificateFile& file) {
    json j;
    j["format"] = kCertificateFormat;
    j["toolkit_version"] = file.toolkit_version;
    j["model_hash"] = file.model_hash;
    j["dim"] = file.p.n();
    j["p_lower"] = vector_json(file.p.packed_lower());
    j["margin"] = file.margin;
    j["lyapunov_gap"] = file.lyapunov_gap;
    write_file(path, j);
}

WitnessFile load_witness(const std::string& path) {
    const json j = parse_file(path);
    require_format(j, path, kWitnessFormat);
    reject_unknown_keys(j, path, {"format", "p", "h"});
    if (!j.contains("p"))
        fail(ErrorKind::Io, path + ": witness needs \"p\"");
    WitnessFile file;
    file.p = SymmetricMatrix::from_dense(matrix_field(j.at("p"), path + ".p"), 1e-12);
    if (j.contains("h")) file.h = matrix_field(j.at("h"), path + ".h");
    return file;
}

ArchitectureFile load_architecture(const std::string& path) {
    const json j = parse_file(path);
    require_format(j, path, kArchitectureFormat);
    reject_unknown_keys(j, path, {"format", "architecture", "plant", "controller"});
    if (!j.contains("architecture") || !j.at("architecture").is_string())
        fail(ErrorKind::Io, path + ": missing string \"architecture\"");
    if (!j.contains("plant") || !j.at("plant").is_object())
        fail(ErrorKind::Io, path + ": missing \"plant\" model object");

    ArchitectureFile file;
    file.architecture = j.at("architecture");
    const ModelFile plant_file = model_from_json(j.at("plant"), path + ".plant");

    auto controller_json = [&]() -> const json& {
        if (!j.contains("controller") || !j.at("controller").is_object())
            fail(ErrorKind::Io, path + ": this architecture needs a \"controller\" object");
        return j.at("controller");
    };

    if (file.architecture == "state_feedback") {
        file.factorization = compose::factorize_state_feedback(to_generic(plant_file));
    } else if (file.architecture == "integrator_state_feedback") {
        file.factorization = compose::factorize_integrator_state_feedback(to_generic(plant_file));
    } else if (file.architecture == "esn_output_feedback") {
        const json& c = controller_json();
        reject_unknown_keys(c, path + ".controller", {"w_x", "w_e", "w_y", "activation"});
        compose::EsnControllerSkeleton skel;
        skel.w_x = matrix_field(c.at("w_x"), path + ".controller.w_x");
        skel.w_e = matrix_field(c.at("w_e"), path + ".controller.w_e");
        skel.w_y = matrix_field(c.at("w_y"), path + ".controller.w_y");
        if (c.contains("activation"))
            skel.activation = activation_field(c.at("activation"), path + ".controller.activation");
        file.factorization = compose::factorize_esn_output_feedback(skel, to_generic(plant_file));
    } else if (file.architecture == "nnarx_output_feedback") {
        const json& c = controller_json();
        reject_unknown_keys(c, path + ".controller", {"w_0", "lags", "activation"});
        compose::NnarxControllerSkeleton skel;
        skel.w_0 = matrix_field(c.at("w_0"), path + ".controller.w_0");
        if (!c.contains("lags") || !c.at("lags").is_number_unsigned())
            fail(ErrorKind::Io, path + ".controller.lags: expected a positive integer");
        skel.lag_count = c.at("lags").get<std::size_t>();
        if (c.contains("activation"))
            skel.activation = activation_field(c.at("activation"), path + ".controller.activation");
        file.factorization = compose::factorize_nnarx_output_feedback(skel, to_generic(plant_file));
    } else if (file.architecture == "esn_integrator") {
        if (plant_file.kind != ModelFile::Kind::Esn)
            fail(ErrorKind::Io, path + ": esn_integrator needs an esn plant");
        const json& c = controller_json();
        reject_unknown_keys(c, path + ".controller", {"w_x", "w_u_v", "w_u_x", "w_y", "activation"});
        compose::EsnIntegratorSkeleton skel;
        skel.w_x = matrix_field(c.at("w_x"), path + ".controller.w_x");
        skel.w_u_v = matrix_field(c.at("w_u_v"), path + ".controller.w_u_v");
        skel.w_u_x = matrix_field(c.at("w_u_x"), path + ".controller.w_u_x");
        skel.w_y = matrix_field(c.at("w_y"), path + ".controller.w_y");
        if (c.contains("activation"))
            skel.activation = activation_field(c.at("activation"), path + ".controller.activation");
        file.factorization = compose::factorize_esn_integrator(skel, plant_file.esn());
        file.esn_plant = plant_file.esn();
        file.esn_integrator_controller = skel;
    } else {
        fail(ErrorKind::Io, path + ": unsupported architecture \"" + file.architecture + "\"");
    }
    return file;
}

void save_gains(const std::string& path, const std::string& architecture,
                const std::map<std::string, DenseMatrix>& gains, const DenseMatrix& j_matrix) {
    json j;
    j["format"] = kGainsFormat;
    j["toolkit_version"] = kToolkitVersion;
    j["architecture"] = architecture;
    json g;
    for (const auto& [name, m] : gains) g[name] = matrix_json(m);
    j["gains"] = std::move(g);
    j["j"] = matrix_json(j_matrix);
    write_file(path, j);
}

std::map<std::string, DenseMatrix> load_gains(const std::string& path) {
    const json j = parse_file(path);
    require_format(j, path, kGainsFormat);
    if (!j.contains("gains") || !j.at("gains").is_object())
        fail(ErrorKind::Io, path + ": missing \"gains\" object");
    std::map<std::string, DenseMatrix> gains;
    for (const auto& item : j.at("gains").items())
        gains[item.key()] = matrix_field(item.value(), path + ".gains." + item.key());
    return gains;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const DenseMatrix& data) {
    if (columns.size() != data.cols())
        fail(ErrorKind::Dimension, "write_csv: header width does not match data");
    std::ofstream out(path);
    if (!out)
        fail(ErrorKind::Io, "cannot write file: " + path);
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i];
    out << '\n';
    char buf[40];
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t c = 0; c < data.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.12g", data(r, c));
            out << (c ? "," : "") << buf;
        }
        out << '\n';
    }
    if (!out)
        fail(ErrorKind::Io, "write failed: " + path);
}

} // namespace deltaiss::io
