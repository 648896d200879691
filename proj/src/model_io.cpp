#include "gtdmine/model_io.hpp"

#include <fstream>
#include <sstream>

#include "gtdmine/decision_tree.hpp"
#include "gtdmine/error.hpp"
#include "gtdmine/kstar.hpp"
#include "gtdmine/mlp.hpp"
#include "gtdmine/naive_bayes.hpp"
#include "gtdmine/neighbors.hpp"
#include "gtdmine/one_vs_rest.hpp"
#include "gtdmine/random_forest.hpp"
#include "gtdmine/text.hpp"
#include "gtdmine/token_io.hpp"

namespace gtdmine {

void write_model(const Classifier& model, const AttributeSchema& schema, std::ostream& out) {
    out << "gtdmine-model " << kModelFormatVersion << '\n';
    out << "family " << family_tag(model.family()) << '\n';
    out << "schema " << hex64(schema.fingerprint()) << '\n';
    out << "payload\n";
    model.write_payload(out);
    out << "end\n";
}

void save_model(const Classifier& model, const AttributeSchema& schema, const std::string& path) {
    std::ostringstream buf;
    write_model(model, schema, buf);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write model file " + path);
    out << buf.str();
    if (!out.flush()) throw Error(Errc::IoError, "failed writing model file " + path);
}

namespace {

template <class M>
std::unique_ptr<Classifier> boxed(M&& m) {
    return std::make_unique<std::decay_t<M>>(std::forward<M>(m));
}

std::unique_ptr<Classifier> read_body(Family family, TokenReader& in) {
    switch (family) {
        case Family::NaiveBayes: return boxed(NaiveBayesModel::read_payload(in));
        case Family::DecisionTree: return boxed(DecisionTree::read_payload(in));
        case Family::RandomForest: return boxed(RandomForest::read_payload(in));
        case Family::IbkLinear: return boxed(KnnModel::read_payload(in, NeighborVariant::LinearScan));
        case Family::IbkBallTree: return boxed(KnnModel::read_payload(in, NeighborVariant::BallTree));
        case Family::KStar: return boxed(KStarModel::read_payload(in));
        case Family::Mlp: return boxed(MlpModel::read_payload(in));
        case Family::OneVsRest: return boxed(OneVsRestModel::read_payload(in));
    }
    throw Error(Errc::CorruptPayload, "unknown family");
}

}  // namespace

PersistedModel read_model(std::istream& stream) {
    TokenReader in(stream);
    PersistedModel pm;
    if (in.word() != "gtdmine-model") throw Error(Errc::CorruptPayload, "not a gtdmine model file");
    const auto version = in.integer();
    if (version != kModelFormatVersion) {
        throw Error(Errc::FormatVersionMismatch, "model format version " + std::to_string(version) +
                                                     " is not supported (expected " +
                                                     std::to_string(kModelFormatVersion) + ")");
    }
    pm.version = static_cast<int>(version);
    in.expect("family");
    const auto tag = in.word();
    const auto family = parse_family(tag);
    if (!family) throw Error(Errc::CorruptPayload, "unknown classifier family '" + tag + "'");
    pm.family = *family;
    in.expect("schema");
    const auto fp = parse_hex64(in.word());
    if (!fp) throw Error(Errc::CorruptPayload, "malformed schema fingerprint");
    pm.schema_fingerprint = *fp;
    in.expect("payload");
    try {
        pm.model = read_body(pm.family, in);
    } catch (const Error& e) {
        if (e.code() == Errc::CorruptPayload) throw;
        throw Error(Errc::CorruptPayload, e.what());
    }
    in.expect("end");
    return pm;
}

PersistedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::FileNotFound, "cannot open model file " + path);
    return read_model(in);
}

std::unique_ptr<Classifier> load_model(const std::string& path, const AttributeSchema& schema) {
    auto pm = load_model(path);
    if (pm.schema_fingerprint != schema.fingerprint()) {
        throw Error(Errc::SchemaFingerprintMismatch,
                    "model " + path + " was trained for schema " + hex64(pm.schema_fingerprint) +
                        ", data uses " + hex64(schema.fingerprint()));
    }
    return std::move(pm.model);
}

}  // namespace gtdmine
