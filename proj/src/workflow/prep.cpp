//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <filesystem>
#include <fstream>
#include <map>

#include "vscreen/dockengine/search.hpp"
#include "vscreen/error.hpp"
#include "vscreen/geometry/embed.hpp"
#include "vscreen/geometry/hydrogens.hpp"
#include "vscreen/geometry/transform.hpp"
#include "vscreen/molmodel/binary_codec.hpp"
#include "vscreen/molmodel/smiles.hpp"
#include "vscreen/predictor/time_tree.hpp"
#include "vscreen/workflow/workflow.hpp"

namespace vscreen {

namespace {

std::string trimmed(const std::string &line) {
  const auto begin = line.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = line.find_last_not_of(" \t\r");
  return line.substr(begin, end - begin + 1);
}

std::string bucket_label(const std::optional<std::uint64_t> &bucket) {
  return bucket ? std::to_string(*bucket) : "none";
}

} // namespace

Ligand prepare_ligand(const std::string &smiles) {
  Ligand ligand = add_hydrogens(parse_smiles(smiles));
  const Conformation embedded = embed_3d(ligand);
  ligand = with_conformation(std::move(ligand), embedded);
  ligand = detect_torsions(std::move(ligand));
  FlattenResult flat = flatten(ligand, conformation_of(ligand));
  return with_conformation(std::move(ligand), flat.conformation);
}

std::string format_manifest(const std::vector<PreparedFile> &files) {
  std::string out;
  for (const PreparedFile &file : files) {
    out += file.path + " records=" + std::to_string(file.records) +
           " bucket=" + bucket_label(file.bucket) + "\n";
  }
  return out;
}

PrepResult cmd_prep(const PrepOptions &options) {
  if (options.target_file_size == 0)
    throw InvalidArgument("target file size must be positive");

  std::ifstream in(options.input_path);
  if (!in)
    throw IoError("cannot open SMILES library '" + options.input_path + "'");

  std::optional<TimeTree> tree;
  if (!options.tree_path.empty()) {
    std::ifstream tree_in(options.tree_path);
    if (!tree_in)
      throw IoError("cannot open tree file '" + options.tree_path + "'");
    std::string text((std::istreambuf_iterator<char>(tree_in)),
                     std::istreambuf_iterator<char>());
    tree = TimeTree::deserialize(text);
  }

  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec)
    throw IoError("cannot create output directory '" + options.out_dir +
                  "': " + ec.message());

  struct OpenFile {
    std::vector<std::uint8_t> bytes = xslb_header();
    std::uint64_t records = 0;
    int next_part = 0;
  };

  PrepResult result;
  std::map<std::optional<std::uint64_t>, OpenFile> open_files;

  const auto file_name = [&](const std::optional<std::uint64_t> &bucket,
                             int part) {
    char tail[32];
    std::snprintf(tail, sizeof(tail), "part-%03d.xslb", part);
    const std::string base =
        bucket ? "bucket-" + std::to_string(*bucket) + "-" + tail : tail;
    return (std::filesystem::path(options.out_dir) / base).string();
  };

  const auto close_file = [&](const std::optional<std::uint64_t> &bucket,
                              OpenFile &file) {
    const std::string path = file_name(bucket, file.next_part);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
      throw IoError("cannot write prepared file '" + path + "'");
    out.write(reinterpret_cast<const char *>(file.bytes.data()),
              static_cast<std::streamsize>(file.bytes.size()));
    out.flush();
    if (!out)
      throw IoError("write failed on '" + path + "'");
    result.files.push_back({path, file.records, bucket});
    ++file.next_part;
    file.bytes = xslb_header();
    file.records = 0;
  };

  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string smiles = trimmed(line);
    if (smiles.empty()) continue;
    try {
      const Ligand ligand = prepare_ligand(smiles);
      const std::vector<std::uint8_t> record = encode_record(ligand);
      std::optional<std::uint64_t> bucket;
      if (tree)
        bucket = bucketize(tree->predict(graph_features(ligand)));

      OpenFile &file = open_files[bucket];
      if (file.records > 0 &&
          file.bytes.size() + record.size() > options.target_file_size)
        close_file(bucket, file);
      file.bytes.insert(file.bytes.end(), record.begin(), record.end());
      ++file.records;
      ++result.prepared;
    } catch (const Error &error) {
      ++result.skipped;
      result.skip_log.push_back("line " + std::to_string(line_no) + ": " +
                                error.what());
    }
  }

  for (auto &[bucket, file] : open_files)
    if (file.records > 0) close_file(bucket, file);

  result.manifest_path =
      (std::filesystem::path(options.out_dir) / "manifest.txt").string();
  std::ofstream manifest(result.manifest_path, std::ios::trunc);
  if (!manifest)
    throw IoError("cannot write manifest '" + result.manifest_path + "'");
  manifest << format_manifest(result.files);
  return result;
}

} // namespace vscreen
