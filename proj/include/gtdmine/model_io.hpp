#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>

#include "gtdmine/classifier.hpp"

namespace gtdmine {

inline constexpr int kModelFormatVersion = 1;

struct PersistedModel {
    int version = kModelFormatVersion;
    Family family = Family::NaiveBayes;
    std::uint64_t schema_fingerprint = 0;
    std::unique_ptr<Classifier> model;
};

/// Plain-text model file:
///   gtdmine-model <version>
///   family <tag>
///   schema <fingerprint, 16 hex digits>
///   payload
///   ...family-specific tokens...
///   end
void write_model(const Classifier& model, const AttributeSchema& schema, std::ostream& out);
void save_model(const Classifier& model, const AttributeSchema& schema, const std::string& path);

/// Throws FormatVersionMismatch or CorruptPayload.
PersistedModel read_model(std::istream& in);
PersistedModel load_model(const std::string& path);
/// As load_model, and throws SchemaFingerprintMismatch unless the file was
/// written for `schema`.
std::unique_ptr<Classifier> load_model(const std::string& path, const AttributeSchema& schema);

}  // namespace gtdmine
