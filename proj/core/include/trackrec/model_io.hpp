#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "trackrec/embedding.hpp"
#include "trackrec/grouping.hpp"

namespace trackrec {

// Binary layout, all integers and floats little-endian:
//   "T2V1" | u32 vocab size V | u32 dim D | u32 mode (0 cbow, 1 skipgram)
//   V x { u16 byte length, UTF-8 track_id, u64 frequency, D x f32 input }
//   V*D x f32 output
inline constexpr char kModelMagic[4] = {'T', '2', 'V', '1'};

void write_model(std::ostream& out, const EmbeddingModel& model);
void save_model(const std::filesystem::path& path, const EmbeddingModel& model);

// `params` supplies the hyperparameters not stored in the file; dim and mode
// must agree with the file header. Throws Error(kModelFileCorrupt) on bad
// magic, truncation or trailing bytes.
EmbeddingModel read_model(std::istream& in, const TrainParams& params, SubgroupKey subgroup);
EmbeddingModel load_model(const std::filesystem::path& path, const TrainParams& params,
                          SubgroupKey subgroup);

struct ManifestEntry {
  SubgroupKey key;
  bool present = false;  // false for sub-groups with no users
  std::string file;
  std::uint64_t users = 0;
  std::uint64_t vocab_size = 0;

  bool operator==(const ManifestEntry&) const = default;
};

struct Manifest {
  GroupingConfig grouping;
  TrainParams params;
  std::uint64_t corpus_checksum = 0;
  std::vector<ManifestEntry> entries;

  bool operator==(const Manifest&) const = default;
};

inline constexpr const char* kManifestFile = "manifest.json";

std::string manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(const std::string& text);

void save_manifest(const std::filesystem::path& model_dir, const Manifest& manifest);
Manifest load_manifest(const std::filesystem::path& model_dir);

using ModelSet = std::map<SubgroupKey, EmbeddingModel>;

// Writes every model plus the manifest. Throws Error(kUnwritableModelDir).
void save_model_set(const std::filesystem::path& model_dir, const Manifest& manifest,
                    const ModelSet& models);

// Loads the manifest and its present models. When `expect_grouping` /
// `expect_params` are given they must equal the manifest's
// (Error(kManifestMismatch) otherwise).
ModelSet load_model_set(const std::filesystem::path& model_dir, Manifest* manifest_out,
                        const GroupingConfig* expect_grouping = nullptr,
                        const TrainParams* expect_params = nullptr);

std::string model_file_name(const SubgroupKey& key);

}  // namespace trackrec
