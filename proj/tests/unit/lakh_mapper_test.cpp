#include "chipscore/lakh_mapper.h"

#include <gtest/gtest.h>

#include <set>

#include "chipscore/error.h"
#include "chipscore/event_codec.h"
#include "test_support.h"

namespace chipscore {
namespace {

Track melodic(std::vector<Note> notes, std::string name = "m") {
  return Track{std::move(name), 0, false, std::move(notes)};
}

Track drums(std::vector<Note> notes) { return Track{"drums", 0, true, std::move(notes)}; }

TEST(MonophonyTest, Examples) {
  MultiTrackScore mts;
  mts.tracks = {melodic({{60, 0, 100}, {62, 100, 200}}), melodic({{60, 0, 200}, {64, 100, 300}}),
                drums({{38, 0, 10}}), melodic({})};
  EXPECT_EQ(find_monophonic_melodic(mts), (std::vector<std::size_t>{0}));
}

TEST(EligibilityTest, Examples) {
  const Track wide = melodic({{40, 0, 1}, {90, 1, 2}});
  EXPECT_TRUE(eligible_for(wide, VoiceKind::kP1));
  EXPECT_TRUE(eligible_for(wide, VoiceKind::kP2));
  EXPECT_TRUE(eligible_for(wide, VoiceKind::kTR));
  const Track low = melodic({{25, 0, 1}});
  EXPECT_FALSE(eligible_for(low, VoiceKind::kP1));
  EXPECT_FALSE(eligible_for(low, VoiceKind::kP2));
  EXPECT_TRUE(eligible_for(low, VoiceKind::kTR));
  const Track high = melodic({{110, 0, 1}});
  for (VoiceKind v : kAllVoices) EXPECT_FALSE(eligible_for(high, v));
}

TEST(AssignMelodicTest, SingleCandidateLandsOnOneVoice) {
  MultiTrackScore mts;
  mts.tracks = {melodic({{60, 0, 10}})};
  Rng rng(1);
  std::set<std::size_t> voices;
  for (int i = 0; i < 300; ++i) {
    const auto a = assign_melodic(mts, std::vector<std::size_t>{0}, rng);
    ASSERT_TRUE(a);
    int filled = 0;
    for (std::size_t v = 0; v < 3; ++v) {
      if ((*a)[v]) {
        ++filled;
        voices.insert(v);
      }
    }
    EXPECT_EQ(filled, 1);
  }
  EXPECT_EQ(voices.size(), 3u);
}

TEST(AssignMelodicTest, FiveCandidatesFillThreeVoices) {
  MultiTrackScore mts;
  for (int i = 0; i < 5; ++i) mts.tracks.push_back(melodic({{50 + i, 0, 10}}));
  Rng rng(2);
  const std::vector<std::size_t> all{0, 1, 2, 3, 4};
  for (int i = 0; i < 200; ++i) {
    const auto a = assign_melodic(mts, all, rng);
    ASSERT_TRUE(a);
    std::set<std::size_t> used;
    for (const auto& slot : *a) {
      ASSERT_TRUE(slot);
      used.insert(*slot);
    }
    EXPECT_EQ(used.size(), 3u);
  }
}

TEST(AssignMelodicTest, TrOnlyCandidateNeverOnPulses) {
  MultiTrackScore mts;
  mts.tracks = {melodic({{25, 0, 10}}), melodic({{60, 0, 10}})};
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const auto a = assign_melodic(mts, std::vector<std::size_t>{0, 1}, rng);
    ASSERT_TRUE(a);
    EXPECT_NE((*a)[0], std::optional<std::size_t>(0));
    EXPECT_NE((*a)[1], std::optional<std::size_t>(0));
    EXPECT_EQ((*a)[2], std::optional<std::size_t>(0));  // both tracks must be placed
  }
}

TEST(AssignMelodicTest, NoEligibleAssignment) {
  MultiTrackScore mts;
  mts.tracks = {melodic({{110, 0, 10}})};
  Rng rng(4);
  EXPECT_FALSE(assign_melodic(mts, std::vector<std::size_t>{0}, rng));
}

TEST(MapPercussionTest, NoPercussion) {
  MultiTrackScore mts;
  mts.tracks = {melodic({{60, 0, 10}})};
  Rng rng(1);
  const auto p = map_percussion(mts, rng);
  EXPECT_TRUE(p.notes.empty());
  EXPECT_TRUE(p.noise_type_of_pitch.empty());
}

TEST(MapPercussionTest, PitchMappingIsConstant) {
  MultiTrackScore mts;
  std::vector<Note> hits;
  for (Tick t = 0; t < 40; ++t) hits.push_back({t % 2 ? 38 : 42, t * 100, t * 100 + 50});
  mts.tracks = {drums(hits)};
  Rng rng(5);
  const auto p = map_percussion(mts, rng);
  ASSERT_EQ(p.noise_type_of_pitch.size(), 2u);
  ASSERT_EQ(p.notes.size(), hits.size());
  for (std::size_t i = 0; i < hits.size(); ++i) {
    EXPECT_EQ(p.notes[i].pitch, p.noise_type_of_pitch.at(hits[i].pitch));
    EXPECT_EQ(p.notes[i].on, hits[i].on);
  }
}

TEST(MapPercussionTest, CollisionRule) {
  // Two simultaneous hits, then a long note overlapped by a later hit.
  MultiTrackScore mts;
  mts.tracks = {drums({{38, 0, 100}, {42, 0, 80}, {49, 200, 500}, {38, 300, 350}})};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto p = map_percussion(mts, rng);
    const int t38 = p.noise_type_of_pitch.at(38);
    const int t42 = p.noise_type_of_pitch.at(42);
    const int t49 = p.noise_type_of_pitch.at(49);
    ASSERT_EQ(p.notes.size(), 3u);
    EXPECT_EQ(p.notes[0].pitch, std::min(t38, t42));
    EXPECT_EQ(p.notes[0].on, 0);
    EXPECT_EQ(p.notes[1], (Note{t49, 200, 300}));
    EXPECT_EQ(p.notes[2], (Note{t38, 300, 350}));
    EXPECT_NO_THROW(check_voice(VoiceKind::kNO, p.notes));
  }
}

TEST(MapFileTest, SkipsWithoutMonophonicTracks) {
  MultiTrackScore mts;
  mts.tracks = {melodic({{60, 0, 200}, {64, 100, 300}}), drums({{38, 0, 10}})};
  Rng rng(1);
  EXPECT_TRUE(map_file(mts, MapperConfig{}, rng).empty());
}

TEST(MapFileTest, SingleEligibleTrackGivesAtMostThreeOutputs) {
  MultiTrackScore mts;
  mts.tracks = {melodic({{60, 0, 200}})};
  Rng rng(1);
  const auto out = map_file(mts, MapperConfig{5, 0}, rng, "x");
  EXPECT_EQ(out.size(), 3u);
  std::set<MelodicAssignment> distinct;
  for (const auto& ex : out) distinct.insert(ex.provenance.melodic);
  EXPECT_EQ(distinct.size(), 3u);
}

TEST(MapFileTest, Properties) {
  Rng songs(77);
  for (int trial = 0; trial < 200; ++trial) {
    const MultiTrackScore mts = testing::random_song(songs, {.length = 20 * kTicksPerSecond});
    const MapperConfig cfg{static_cast<std::size_t>(songs.uniform_int(1, 6)), 0};
    const std::uint64_t seed = songs.next_u64();
    Rng a(seed), b(seed);
    const auto out = map_file(mts, cfg, a, "song");
    const auto again = map_file(mts, cfg, b, "song");
    ASSERT_EQ(out.size(), again.size());
    EXPECT_LE(out.size(), cfg.max_outputs_per_input);
    if (find_monophonic_melodic(mts).empty()) EXPECT_TRUE(out.empty());
    std::set<MelodicAssignment> seen;
    for (std::size_t i = 0; i < out.size(); ++i) {
      EXPECT_EQ(out[i].score, again[i].score);
      EXPECT_EQ(out[i].provenance.melodic, again[i].provenance.melodic);
      EXPECT_TRUE(seen.insert(out[i].provenance.melodic).second);
      std::set<std::size_t> used;
      for (const auto& slot : out[i].provenance.melodic) {
        if (slot) EXPECT_TRUE(used.insert(*slot).second);
      }
      for (VoiceKind v : kAllVoices) EXPECT_NO_THROW(check_voice(v, out[i].score.notes(v)));
      EXPECT_TRUE(validate(encode(out[i].score)).clean());
    }
  }
}

TEST(MapFileTest, RejectsZeroCap) {
  Rng rng(1);
  EXPECT_THROW(map_file(MultiTrackScore{}, MapperConfig{0, 0}, rng), PreconditionError);
}

TEST(ProvenanceTest, Format) {
  Provenance p;
  p.source_id = "a/b.mid";
  p.melodic = {std::optional<std::size_t>(2), std::nullopt, std::optional<std::size_t>(0)};
  p.percussion = {{38, 5}, {42, 11}};
  p.seed = 17;
  EXPECT_EQ(format_provenance(p), "a/b.mid\tP1=2\tP2=-\tTR=0\tNO=38:5,42:11\tseed=17");
  p.percussion.clear();
  EXPECT_EQ(format_provenance(p), "a/b.mid\tP1=2\tP2=-\tTR=0\tNO=-\tseed=17");
}

}  // namespace
}  // namespace chipscore
