#include "chipscore/lakh_mapper.h"

#include <algorithm>
#include <set>
#include <tuple>

#include "chipscore/error.h"

namespace chipscore {
namespace {

// All injective assignments of candidates to `voices` (in order) that
// respect eligibility, appended to `out`.
void enumerate_assignments(const std::vector<std::vector<std::size_t>>& eligible_by_voice,
                           const std::vector<std::size_t>& voices, std::size_t depth,
                           MelodicAssignment& current, std::set<std::size_t>& used,
                           std::vector<MelodicAssignment>& out) {
  if (depth == voices.size()) {
    out.push_back(current);
    return;
  }
  const std::size_t voice = voices[depth];
  for (std::size_t track : eligible_by_voice[voice]) {
    if (used.count(track)) continue;
    used.insert(track);
    current[voice] = track;
    enumerate_assignments(eligible_by_voice, voices, depth + 1, current, used, out);
    current[voice].reset();
    used.erase(track);
  }
}

struct AssignmentSpace {
  // For every fillable voice subset of maximal size, its assignments.
  std::vector<std::vector<MelodicAssignment>> per_subset;

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& s : per_subset) n += s.size();
    return n;
  }
};

AssignmentSpace assignment_space(const MultiTrackScore& mts, std::span<const std::size_t> candidates) {
  std::vector<std::vector<std::size_t>> eligible(kMelodicVoices.size());
  for (std::size_t track : candidates) {
    if (track >= mts.tracks.size()) throw PreconditionError("candidate track index out of range");
    for (std::size_t v = 0; v < kMelodicVoices.size(); ++v) {
      if (eligible_for(mts.tracks[track], kMelodicVoices[v])) eligible[v].push_back(track);
    }
  }
  AssignmentSpace space;
  for (std::size_t size = kMelodicVoices.size(); size >= 1; --size) {
    // Subsets of {0, 1, 2} with `size` members, in a fixed order.
    for (unsigned mask = 1; mask < 8; ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != size) continue;
      std::vector<std::size_t> voices;
      for (std::size_t v = 0; v < 3; ++v) {
        if (mask & (1u << v)) voices.push_back(v);
      }
      std::vector<MelodicAssignment> assignments;
      MelodicAssignment current{};
      std::set<std::size_t> used;
      enumerate_assignments(eligible, voices, 0, current, used, assignments);
      if (!assignments.empty()) space.per_subset.push_back(std::move(assignments));
    }
    if (!space.per_subset.empty()) break;
  }
  return space;
}

MelodicAssignment draw_assignment(const AssignmentSpace& space, Rng& rng) {
  const auto& subset = space.per_subset[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(space.per_subset.size()) - 1))];
  return subset[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(subset.size()) - 1))];
}

Score build_score(const MultiTrackScore& mts, const MelodicAssignment& melodic, std::vector<Note> noise) {
  Score::Parts parts;
  for (std::size_t v = 0; v < kMelodicVoices.size(); ++v) {
    if (melodic[v]) parts[v] = mts.tracks[*melodic[v]].notes;
  }
  parts[index_of(VoiceKind::kNO)] = std::move(noise);
  return Score(std::move(parts));
}

}  // namespace

void MapperConfig::validate() const {
  if (max_outputs_per_input < 1) throw PreconditionError("max_outputs_per_input must be at least 1");
}

bool is_monophonic(std::span<const Note> notes) {
  std::vector<Note> sorted(notes.begin(), notes.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i - 1].off > sorted[i].on) return false;
  }
  return true;
}

std::vector<std::size_t> find_monophonic_melodic(const MultiTrackScore& mts) {
  std::vector<std::size_t> found;
  for (std::size_t i = 0; i < mts.tracks.size(); ++i) {
    const Track& track = mts.tracks[i];
    if (track.is_percussion || track.notes.empty()) continue;
    if (is_monophonic(track.notes)) found.push_back(i);
  }
  return found;
}

bool eligible_for(const Track& track, VoiceKind voice) {
  if (voice == VoiceKind::kNO) return false;
  const PitchRange range = pitch_range(voice);
  return std::all_of(track.notes.begin(), track.notes.end(),
                     [&](const Note& n) { return range.contains(n.pitch); });
}

std::optional<MelodicAssignment> assign_melodic(const MultiTrackScore& mts,
                                                std::span<const std::size_t> candidates, Rng& rng) {
  const AssignmentSpace space = assignment_space(mts, candidates);
  if (space.per_subset.empty()) return std::nullopt;
  return draw_assignment(space, rng);
}

PercussionMapping map_percussion(const MultiTrackScore& mts, Rng& rng) {
  PercussionMapping mapping;
  std::set<int> pitches;
  for (const Track& track : mts.tracks) {
    if (!track.is_percussion) continue;
    for (const Note& n : track.notes) pitches.insert(n.pitch);
  }
  const PitchRange types = pitch_range(VoiceKind::kNO);
  for (int pitch : pitches) {
    mapping.noise_type_of_pitch[pitch] = static_cast<int>(rng.uniform_int(types.low, types.high));
  }

  std::vector<Note> hits;
  for (const Track& track : mts.tracks) {
    if (!track.is_percussion) continue;
    for (const Note& n : track.notes) hits.push_back({mapping.noise_type_of_pitch.at(n.pitch), n.on, n.off});
  }
  std::sort(hits.begin(), hits.end(), [](const Note& a, const Note& b) {
    return std::tie(a.on, a.pitch, a.off) < std::tie(b.on, b.pitch, b.off);
  });
  for (const Note& hit : hits) {
    if (!mapping.notes.empty()) {
      Note& prev = mapping.notes.back();
      if (prev.on == hit.on) continue;  // lowest type at this onset already kept
      if (prev.off > hit.on) prev.off = hit.on;
    }
    mapping.notes.push_back(hit);
  }
  return mapping;
}

std::vector<MappedExample> map_file(const MultiTrackScore& mts, const MapperConfig& cfg, Rng& rng,
                                    std::string_view source_id) {
  cfg.validate();
  std::vector<MappedExample> out;
  const auto candidates = find_monophonic_melodic(mts);
  if (candidates.empty()) return out;
  const AssignmentSpace space = assignment_space(mts, candidates);
  if (space.per_subset.empty()) return out;

  // Every outcome has positive probability, so drawing until `target`
  // distinct assignments are seen terminates.
  const std::size_t target = std::min(cfg.max_outputs_per_input, space.total());
  std::set<MelodicAssignment> seen;
  while (out.size() < target) {
    const MelodicAssignment melodic = draw_assignment(space, rng);
    if (!seen.insert(melodic).second) continue;
    PercussionMapping percussion = map_percussion(mts, rng);
    MappedExample example{build_score(mts, melodic, std::move(percussion.notes)), {}};
    example.provenance.source_id = std::string(source_id);
    example.provenance.melodic = melodic;
    example.provenance.percussion = std::move(percussion.noise_type_of_pitch);
    out.push_back(std::move(example));
  }
  return out;
}

std::string format_provenance(const Provenance& provenance) {
  std::string line = provenance.source_id;
  for (std::size_t v = 0; v < kMelodicVoices.size(); ++v) {
    line += '\t';
    line += voice_name(kMelodicVoices[v]);
    line += '=';
    line += provenance.melodic[v] ? std::to_string(*provenance.melodic[v]) : "-";
  }
  line += "\tNO=";
  bool first = true;
  for (const auto& [pitch, type] : provenance.percussion) {
    if (!first) line += ',';
    first = false;
    line += std::to_string(pitch) + ":" + std::to_string(type);
  }
  if (first) line += '-';
  line += "\tseed=" + std::to_string(provenance.seed);
  return line;
}

}  // namespace chipscore
