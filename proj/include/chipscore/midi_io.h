// Standard MIDI File reading and writing.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "chipscore/score.h"

namespace chipscore {

/// Written files use 22050 ticks per quarter at 500000 us per quarter, which
/// makes one MIDI tick exactly 1/44100 s.
inline constexpr int kOutputPpq = 22050;
inline constexpr int kOutputTempo = 500000;

/// Parses an SMF (format 0 or 1) and converts every note to 44100 Hz ticks
/// through the file's tempo map. Each (MTrk chunk, channel) pair holding
/// notes becomes one Track; a named MTrk without notes yields an empty
/// Track. Channel 10 is flagged as percussion. Throws MidiParseError.
MultiTrackScore parse_midi(std::span<const std::uint8_t> bytes);

/// Explicit track index -> voice assignment for load_nes_score.
using VoiceMap = std::map<std::size_t, VoiceKind>;

/// Interprets a parsed NES-MDB style file as a Score. Voices are identified
/// by voice_map when given, otherwise by track-name prefix (p1/p2/tr/no),
/// otherwise by track order when the file has exactly four tracks. Noise
/// types are carried as MIDI pitches 1..16 on the NO track. Throws
/// ScoreError for unidentifiable voices, out-of-range pitches or overlaps.
Score load_nes_score(const MultiTrackScore& mts, const std::optional<VoiceMap>& voice_map = {});

/// Format-1 file with tracks p1, p2, tr, no on channels 1-4.
std::vector<std::uint8_t> write_midi(const Score& score);

/// Format-1 file with one MTrk per track, using the same fixed timing as
/// write_midi. Percussion tracks go to channel 10, the rest take the other
/// channels in order (wrapping after 15 melodic tracks).
std::vector<std::uint8_t> write_multitrack_midi(const MultiTrackScore& mts);

}  // namespace chipscore
