// Maps arbitrary-ensemble MIDI onto the NES ensemble.
//
// Monophonic melodic tracks whose pitches fit a voice's range are randomly
// assigned to P1/P2/TR; each percussion pitch is randomly assigned a noise
// type. Several distinct assignments are produced per input.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chipscore/rng.h"
#include "chipscore/score.h"

namespace chipscore {

struct MapperConfig {
  std::size_t max_outputs_per_input = 5;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Track index per melodic voice, indexed P1, P2, TR. Unassigned voices
/// stay empty in the output.
using MelodicAssignment = std::array<std::optional<std::size_t>, 3>;

struct PercussionMapping {
  /// Source percussion pitch -> noise type in [1, 16].
  std::map<int, int> noise_type_of_pitch;
  /// Monophonic NO voice.
  std::vector<Note> notes;
};

struct Provenance {
  std::string source_id;
  MelodicAssignment melodic;
  std::map<int, int> percussion;
  std::uint64_t seed = 0;
};

struct MappedExample {
  Score score;
  Provenance provenance;
};

/// True when no two notes overlap in time (zero tolerance).
bool is_monophonic(std::span<const Note> notes);

/// Non-percussion tracks with at least one note and no overlaps.
std::vector<std::size_t> find_monophonic_melodic(const MultiTrackScore& mts);

/// True iff every pitch of the track lies in the melodic voice's range.
/// Always false for the noise voice.
bool eligible_for(const Track& track, VoiceKind voice);

/// Picks a uniformly random subset of melodic voices of the largest
/// fillable size (at most 3), then a uniformly random injective assignment
/// of eligible candidate tracks to it. nullopt when no candidate fits any
/// voice.
std::optional<MelodicAssignment> assign_melodic(const MultiTrackScore& mts,
                                                std::span<const std::size_t> candidates, Rng& rng);

/// Random noise type per distinct percussion pitch; the merged hits are made
/// monophonic by truncating each note at the next onset, and among hits at
/// the same onset only the lowest noise type survives.
PercussionMapping map_percussion(const MultiTrackScore& mts, Rng& rng);

/// Up to cfg.max_outputs_per_input examples with pairwise distinct melodic
/// assignments; empty when the input has no usable monophonic melodic track.
std::vector<MappedExample> map_file(const MultiTrackScore& mts, const MapperConfig& cfg, Rng& rng,
                                    std::string_view source_id = {});

/// One tab-separated provenance line (no trailing newline).
std::string format_provenance(const Provenance& provenance);

}  // namespace chipscore
