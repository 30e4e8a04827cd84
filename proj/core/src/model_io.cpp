#include "trackrec/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json_io.hpp"
#include "trackrec/error.hpp"

namespace trackrec {

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>(value >> (8 * i));
  out.write(bytes, sizeof(T));
}

void put_f32(std::ostream& out, float value) { put_le(out, std::bit_cast<std::uint32_t>(value)); }

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  template <typename T>
  T get_le() {
    unsigned char bytes[sizeof(T)];
    read(bytes, sizeof(T));
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
    return value;
  }

  float get_f32() { return std::bit_cast<float>(get_le<std::uint32_t>()); }

  void read(void* dst, std::size_t size) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(size));
    if (static_cast<std::size_t>(in_.gcount()) != size) {
      throw Error(ErrorCode::kModelFileCorrupt, "unexpected end of model data");
    }
  }

  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  std::istream& in_;
};

}  // namespace

void write_model(std::ostream& out, const EmbeddingModel& model) {
  out.write(kModelMagic, sizeof(kModelMagic));
  put_le(out, static_cast<std::uint32_t>(model.size()));
  put_le(out, static_cast<std::uint32_t>(model.dim()));
  put_le(out, static_cast<std::uint32_t>(model.params().mode));
  for (std::uint32_t i = 0; i < model.size(); ++i) {
    const auto& token = model.vocab().token(i);
    if (token.size() > UINT16_MAX) {
      throw Error(ErrorCode::kModelFileCorrupt, "track_id longer than 65535 bytes");
    }
    put_le(out, static_cast<std::uint16_t>(token.size()));
    out.write(token.data(), static_cast<std::streamsize>(token.size()));
    put_le(out, model.vocab().frequency(i));
    for (float v : model.input_row(i)) put_f32(out, v);
  }
  for (float v : model.output_matrix()) put_f32(out, v);
}

void save_model(const std::filesystem::path& path, const EmbeddingModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kUnwritableModelDir, "cannot write " + path.string());
  write_model(out, model);
  if (!out) throw Error(ErrorCode::kUnwritableModelDir, "write failed for " + path.string());
}

EmbeddingModel read_model(std::istream& in, const TrainParams& params, SubgroupKey subgroup) {
  Reader reader(in);
  char magic[4];
  reader.read(magic, sizeof(magic));
  if (std::memcmp(magic, kModelMagic, sizeof(magic)) != 0) {
    throw Error(ErrorCode::kModelFileCorrupt, "bad magic bytes");
  }
  const auto vocab_size = reader.get_le<std::uint32_t>();
  const auto dim = reader.get_le<std::uint32_t>();
  const auto mode = reader.get_le<std::uint32_t>();
  if (mode > 1) throw Error(ErrorCode::kModelFileCorrupt, "unknown mode flag");
  if (dim != params.dim || static_cast<TrainMode>(mode) != params.mode) {
    throw Error(ErrorCode::kManifestMismatch, "model header disagrees with manifest params");
  }

  std::vector<std::string> tokens(vocab_size);
  std::vector<std::uint64_t> counts(vocab_size);
  std::vector<float> input;
  input.reserve(std::size_t{vocab_size} * dim);
  for (std::uint32_t i = 0; i < vocab_size; ++i) {
    const auto length = reader.get_le<std::uint16_t>();
    tokens[i].resize(length);
    reader.read(tokens[i].data(), length);
    counts[i] = reader.get_le<std::uint64_t>();
    for (std::uint32_t d = 0; d < dim; ++d) input.push_back(reader.get_f32());
  }
  std::vector<float> output(std::size_t{vocab_size} * dim);
  for (auto& v : output) v = reader.get_f32();
  if (!reader.at_end()) throw Error(ErrorCode::kModelFileCorrupt, "trailing bytes after model");

  Vocab vocab;
  try {
    vocab = Vocab::from_entries(std::move(tokens), std::move(counts));
  } catch (const Error& e) {
    throw Error(ErrorCode::kModelFileCorrupt, e.what());
  }
  return EmbeddingModel(std::move(vocab), params, std::move(subgroup), std::move(input),
                        std::move(output));
}

EmbeddingModel load_model(const std::filesystem::path& path, const TrainParams& params,
                          SubgroupKey subgroup) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kModelFileCorrupt, "cannot open " + path.string());
  return read_model(in, params, std::move(subgroup));
}

std::string manifest_to_json(const Manifest& manifest) {
  Json doc;
  doc["format"] = "T2V1";
  doc["grouping"] = grouping_to_json(manifest.grouping);
  doc["train_params"] = params_to_json(manifest.params);
  std::ostringstream checksum;
  checksum << std::hex << manifest.corpus_checksum;
  doc["corpus_checksum"] = checksum.str();
  auto& models = doc["models"] = Json::array();
  for (const auto& e : manifest.entries) {
    models.push_back({{"dimension", e.key.dimension},
                      {"bucket", e.key.bucket},
                      {"present", e.present},
                      {"file", e.file},
                      {"users", e.users},
                      {"vocab_size", e.vocab_size}});
  }
  return doc.dump(2);
}

Manifest manifest_from_json(const std::string& text) {
  Manifest manifest;
  try {
    const auto doc = Json::parse(text);
    if (doc.value("format", std::string{}) != "T2V1") {
      throw Error(ErrorCode::kModelFileCorrupt, "manifest format is not T2V1");
    }
    manifest.grouping = grouping_from_json(doc.at("grouping"));
    manifest.params = params_from_json(doc.at("train_params"));
    manifest.corpus_checksum = std::stoull(doc.at("corpus_checksum").get<std::string>(), nullptr, 16);
    for (const auto& m : doc.at("models")) {
      ManifestEntry e;
      e.key.dimension = m.at("dimension").get<std::string>();
      e.key.bucket = m.at("bucket").get<std::uint32_t>();
      e.present = m.at("present").get<bool>();
      e.file = m.value("file", std::string{});
      e.users = m.value("users", std::uint64_t{0});
      e.vocab_size = m.value("vocab_size", std::uint64_t{0});
      manifest.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kModelFileCorrupt, std::string("manifest: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::kModelFileCorrupt, std::string("manifest: ") + e.what());
  }
  return manifest;
}

void save_manifest(const std::filesystem::path& model_dir, const Manifest& manifest) {
  std::ofstream out(model_dir / kManifestFile, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kUnwritableModelDir, "cannot write manifest in " + model_dir.string());
  out << manifest_to_json(manifest) << '\n';
}

Manifest load_manifest(const std::filesystem::path& model_dir) {
  std::ifstream in(model_dir / kManifestFile);
  if (!in) throw Error(ErrorCode::kModelFileCorrupt, "no manifest in " + model_dir.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return manifest_from_json(buffer.str());
}

std::string model_file_name(const SubgroupKey& key) { return to_string(key) + ".t2v"; }

void save_model_set(const std::filesystem::path& model_dir, const Manifest& manifest,
                    const ModelSet& models) {
  std::error_code ec;
  std::filesystem::create_directories(model_dir, ec);
  if (ec) throw Error(ErrorCode::kUnwritableModelDir, model_dir.string() + ": " + ec.message());
  for (const auto& entry : manifest.entries) {
    if (!entry.present) continue;
    save_model(model_dir / entry.file, models.at(entry.key));
  }
  save_manifest(model_dir, manifest);
}

ModelSet load_model_set(const std::filesystem::path& model_dir, Manifest* manifest_out,
                        const GroupingConfig* expect_grouping, const TrainParams* expect_params) {
  auto manifest = load_manifest(model_dir);
  if (expect_grouping && !(*expect_grouping == manifest.grouping)) {
    throw Error(ErrorCode::kManifestMismatch, "grouping differs from the trained models");
  }
  // Thread count changes neither the file format nor the scoring.
  if (expect_params) {
    auto expected = *expect_params;
    expected.threads = manifest.params.threads;
    if (!(expected == manifest.params)) {
      throw Error(ErrorCode::kManifestMismatch, "train_params differ from the trained models");
    }
  }
  ModelSet models;
  for (const auto& entry : manifest.entries) {
    if (!entry.present) continue;
    models.emplace(entry.key, load_model(model_dir / entry.file, manifest.params, entry.key));
  }
  if (manifest_out) *manifest_out = std::move(manifest);
  return models;
}

}  // namespace trackrec
