#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "topiclab/lda.hpp"
#include "topiclab/lsa.hpp"
#include "topiclab/nmf.hpp"

namespace topiclab::model_io {

// Model files start with the line `TLAB1`, followed by a JSON object with a
// "type" of lsa, nmf or lda, the vocabulary hash and the per-type fields.
// LDA keeps its topic-word counts; phi is recomputed from them on load.

using AnyModel = std::variant<lsa::LsaModel, nmf::NmfModel, lda::LdaModel>;

inline constexpr std::string_view kMagic = "TLAB1";

std::string serialize(const AnyModel& model);
/// Throws Error(Malformed) for a missing magic line or a bad body.
AnyModel parse(std::string_view text);

void save(const std::filesystem::path& path, const AnyModel& model);
AnyModel load(const std::filesystem::path& path);
/// Throws Error(InvalidArgument) when the file holds another model type.
lda::LdaModel load_lda(const std::filesystem::path& path);

/// SHA-256 of the file's bytes, as recorded in annotation headers.
std::string file_hash(const std::filesystem::path& path);

}  // namespace topiclab::model_io
