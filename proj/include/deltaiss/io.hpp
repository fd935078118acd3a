#pragma once

#include "deltaiss/certify.hpp"
#include "deltaiss/compose.hpp"
#include "deltaiss/models.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>

namespace deltaiss::io {

inline constexpr const char* kToolkitVersion = "0.1.0";

/// Parsed model file: one of the four supported kinds. Unknown keys and
/// malformed fields are rejected with field-level diagnostics.
struct ModelFile {
    enum class Kind { Generic, Esn, Nnarx, Hu };

    Kind kind = Kind::Generic;
    std::variant<models::GenericRnn, models::Esn, models::ShallowNnarx, models::HuRnn> model;

    const models::GenericRnn& generic() const { return std::get<models::GenericRnn>(model); }
    const models::Esn& esn() const { return std::get<models::Esn>(model); }
    const models::ShallowNnarx& nnarx() const { return std::get<models::ShallowNnarx>(model); }
    const models::HuRnn& hu() const { return std::get<models::HuRnn>(model); }
};

ModelFile load_model(const std::string& path);
void save_model(const std::string& path, const ModelFile& file);

/// Canonical conversion to the generic class (identity for Kind::Generic).
models::GenericRnn to_generic(const ModelFile& file);

/// FNV-1a over the canonical serialized model, as a hex string.
std::string model_hash(const ModelFile& file);

struct CertificateFile {
    std::string model_hash;
    SymmetricMatrix p;
    double margin = 0.0;
    double lyapunov_gap = 0.0;
    std::string toolkit_version = kToolkitVersion;
};

CertificateFile load_certificate(const std::string& path);
void save_certificate(const std::string& path, const CertificateFile& file);

/// Witness file for --check-witness: a candidate P, optionally with the
/// synthesis variable H.
struct WitnessFile {
    SymmetricMatrix p;
    std::optional<DenseMatrix> h;
};

WitnessFile load_witness(const std::string& path);

/// Architecture descriptor: which closed-loop architecture to synthesize and
/// the known matrices it needs. `esn_plant` is set for the ESN-with-integrator
/// architecture (whose loop rebuild needs the raw plant).
struct ArchitectureFile {
    std::string architecture;
    compose::GainFactorization factorization;
    std::optional<models::Esn> esn_plant;
    std::optional<compose::EsnIntegratorSkeleton> esn_integrator_controller;
};

ArchitectureFile load_architecture(const std::string& path);

void save_gains(const std::string& path, const std::string& architecture,
                const std::map<std::string, DenseMatrix>& gains, const DenseMatrix& j);
std::map<std::string, DenseMatrix> load_gains(const std::string& path);

/// Time-indexed CSV: header row, 12 significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const DenseMatrix& data);

} // namespace deltaiss::io
