//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <fstream>

#include "vscreen/dockengine/pocket_io.hpp"
#include "vscreen/dockengine/search.hpp"
#include "vscreen/error.hpp"
#include "vscreen/geometry/transform.hpp"
#include "vscreen/molmodel/binary_codec.hpp"
#include "vscreen/molmodel/mol2.hpp"
#include "vscreen/workflow/workflow.hpp"

namespace vscreen {

RegenReport cmd_regen(const RegenOptions &options) {
  const Pocket pocket = read_pocket_file(options.pocket_path);

  // Round trip through the wire format: a campaign docks coordinates that
  // were quantized by encoding, so the regenerated score must too.
  const Ligand prepared = prepare_ligand(options.smiles);
  const std::vector<std::uint8_t> wire = encode_record(prepared);
  auto [ligand, end] = decode_record(wire, 0);
  (void)end;

  const DockResult docked = dock_and_score(pocket, ligand, options.scoring);

  RegenReport report;
  report.score = docked.best_score;
  report.row = format_row({docked.smiles, docked.best_score});
  const Ligand posed =
      with_conformation(std::move(ligand), docked.best_pose.conformation);
  report.mol2 = write_mol2(posed);

  if (!options.out_mol2.empty()) {
    std::ofstream out(options.out_mol2, std::ios::trunc);
    if (!out)
      throw IoError("cannot write pose file '" + options.out_mol2 + "'");
    out << report.mol2;
    out.flush();
    if (!out) throw IoError("write failed on '" + options.out_mol2 + "'");
    report.mol2_path = options.out_mol2;
  }
  return report;
}

} // namespace vscreen
