#pragma once

#include "tms/terminal.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tms::io {

/// A built structure as stored on disk.  Spanners are plain edge lists with
/// "# key value" header lines; every other structure is a JSON document.
/// Exactly one payload field is set, according to `type`.
struct StructureFile {
  std::string type;  // spanner, spanner-k, labeling, oracle, labeling-k, oracle-k, embed-linf, embed-l2
  double eps = 0;
  Index n = 0;
  std::vector<Index> terminals;

  std::optional<TerminalSpanner> spanner;
  std::optional<TerminalLabeling> labeling;
  std::optional<KDoublingLabeling> k_labeling;

  // Embeddings: coords is n x D, compared against scale * d in the l_p norm.
  MatrixXd coords;
  double p = 2;
  double scale = 1;
  int t = 0;                    // l_inf: families per level
  std::vector<Index> y_points;  // l_2: enriched set
  HangMap hang;                 // l_2: hang map of X \ Y
  std::uint64_t seed = 0;
};

const std::vector<std::string>& structure_types();

StructureFile from_spanner(const TerminalSpanner& spanner);
StructureFile from_labeling(const TerminalLabeling& labeling, bool oracle);
StructureFile from_labeling(const KDoublingLabeling& labeling, bool oracle);

/// Throws std::runtime_error on I/O failure or malformed content.
void save_structure(const std::filesystem::path& path, const StructureFile& s);
StructureFile load_structure(const std::filesystem::path& path);

}  // namespace tms::io
