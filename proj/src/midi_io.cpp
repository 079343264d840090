#include "chipscore/midi_io.h"

#include <algorithm>
#include <array>
#include <cstring>
#include <iterator>
#include <string>
#include <tuple>

#include "chipscore/error.h"

namespace chipscore {
namespace {

// Exact rational tick arithmetic; products of tempo, ticks and the sample
// rate overflow 64 bits.
__extension__ using Wide = __int128;

constexpr int kPercussionChannel = 9;
constexpr std::uint32_t kMaxVlq = 0x0FFFFFFF;
constexpr int kNoteVelocity = 100;

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  void require(std::size_t n, const char* what) const {
    if (remaining() < n) throw MidiParseError(pos_, std::string("truncated ") + what);
  }

  std::uint8_t u8(const char* what) {
    require(1, what);
    return bytes_[pos_++];
  }

  std::uint16_t u16(const char* what) {
    require(2, what);
    const auto v = static_cast<std::uint16_t>(bytes_[pos_] << 8 | bytes_[pos_ + 1]);
    pos_ += 2;
    return v;
  }

  std::uint32_t u32(const char* what) {
    require(4, what);
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < 4; ++i) v = v << 8 | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }

  std::uint32_t vlq() {
    const std::size_t start = pos_;
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i) {
      const std::uint8_t b = u8("variable-length quantity");
      value = value << 7 | (b & 0x7F);
      if ((b & 0x80) == 0) return value;
    }
    throw MidiParseError(start, "variable-length quantity longer than 4 bytes");
  }

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    require(n, what);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  void skip_to(std::size_t pos) { pos_ = pos; }

  bool match(const char* tag) const {
    return remaining() >= 4 && std::memcmp(bytes_.data() + pos_, tag, 4) == 0;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

struct TempoChange {
  std::uint64_t tick;
  std::uint32_t micros_per_quarter;
};

// Converts MIDI ticks to 44100 Hz ticks exactly: positions are integer
// numerators over a fixed denominator, rounded half up at the end.
class TickConverter {
 public:
  TickConverter(std::uint16_t division, std::vector<TempoChange> tempos) {
    if (division & 0x8000) {
      const int fps = -static_cast<int>(static_cast<std::int8_t>(division >> 8));
      const int ticks_per_frame = division & 0xFF;
      // 29 denotes 29.97 drop-frame, i.e. 30000/1001 frames per second.
      const Wide fps_num = fps == 29 ? 30000 : fps;
      const Wide fps_den = fps == 29 ? 1001 : 1;
      smpte_ = true;
      numerator_per_tick_ = kTicksPerSecond * fps_den;
      denominator_ = fps_num * ticks_per_frame;
      if (denominator_ <= 0) throw MidiParseError(12, "invalid SMPTE division");
      return;
    }
    if (division == 0) throw MidiParseError(12, "zero ticks per quarter note");
    denominator_ = static_cast<Wide>(division) * 1000000;
    std::stable_sort(tempos.begin(), tempos.end(),
                     [](const TempoChange& a, const TempoChange& b) { return a.tick < b.tick; });
    segments_.push_back({0, 500000, 0});
    for (const TempoChange& change : tempos) {
      if (change.tick == segments_.back().start) {
        segments_.back().tempo = change.micros_per_quarter;
        continue;
      }
      const Wide acc = position(change.tick);
      segments_.push_back({change.tick, change.micros_per_quarter, acc});
    }
  }

  Tick convert(std::uint64_t midi_tick) const {
    const Wide num = position(midi_tick);
    return static_cast<Tick>((num + denominator_ / 2) / denominator_);
  }

 private:
  struct Segment {
    std::uint64_t start;
    std::uint32_t tempo;
    Wide accumulated;
  };

  Wide position(std::uint64_t midi_tick) const {
    if (smpte_) return static_cast<Wide>(midi_tick) * numerator_per_tick_;
    auto it = std::upper_bound(segments_.begin(), segments_.end(), midi_tick,
                               [](std::uint64_t t, const Segment& s) { return t < s.start; });
    const Segment& seg = *std::prev(it);
    return seg.accumulated +
           static_cast<Wide>(midi_tick - seg.start) * seg.tempo * kTicksPerSecond;
  }

  bool smpte_ = false;
  Wide numerator_per_tick_ = 0;
  Wide denominator_ = 1;
  std::vector<Segment> segments_;
};

enum class RawKind { kNoteOn, kNoteOff, kProgram };

struct RawEvent {
  std::uint64_t tick;
  RawKind kind;
  int channel;
  int data;  // key or program number
};

struct RawTrack {
  std::string name;
  std::vector<RawEvent> events;
  std::uint64_t end_tick = 0;
};

RawTrack read_track(ByteReader& reader, std::size_t chunk_end, std::vector<TempoChange>& tempos) {
  RawTrack track;
  std::uint64_t tick = 0;
  int running_status = -1;
  bool have_name = false;
  while (reader.offset() < chunk_end) {
    tick += reader.vlq();
    const std::size_t event_offset = reader.offset();
    const std::uint8_t lead = reader.u8("event");

    if (lead == 0xFF) {
      const std::uint8_t type = reader.u8("meta type");
      const std::uint32_t length = reader.vlq();
      auto data = reader.take(length, "meta event");
      if (type == 0x51) {
        if (length != 3) {
          throw MidiParseError(event_offset, "tempo event of length " + std::to_string(length));
        }
        const auto tempo = static_cast<std::uint32_t>(data[0] << 16 | data[1] << 8 | data[2]);
        if (tempo == 0) throw MidiParseError(event_offset, "zero tempo");
        tempos.push_back({tick, tempo});
      } else if (type == 0x03 && !have_name) {
        track.name.assign(data.begin(), data.end());
        have_name = true;
      } else if (type == 0x2F) {
        break;
      }
      continue;
    }
    if (lead == 0xF0 || lead == 0xF7) {
      reader.take(reader.vlq(), "sysex event");
      running_status = -1;
      continue;
    }
    if (lead > 0xF0) throw MidiParseError(event_offset, "system message inside a track");

    int status = lead;
    std::array<int, 2> data{0, 0};
    std::size_t have = 0;
    if (lead < 0x80) {
      if (running_status < 0) {
        throw MidiParseError(event_offset, "data byte without a running status");
      }
      status = running_status;
      data[have++] = lead;
    }
    running_status = status;
    const int type = status & 0xF0;
    const int channel = status & 0x0F;
    const std::size_t data_bytes = (type == 0xC0 || type == 0xD0) ? 1 : 2;
    for (; have < data_bytes; ++have) data[have] = reader.u8("channel message");
    if ((data[0] | data[1]) & 0x80) {
      throw MidiParseError(event_offset, "channel message data byte above 127");
    }
    if (type == 0x90 && data[1] > 0) {
      track.events.push_back({tick, RawKind::kNoteOn, channel, data[0]});
    } else if (type == 0x80 || type == 0x90) {
      track.events.push_back({tick, RawKind::kNoteOff, channel, data[0]});
    } else if (type == 0xC0) {
      track.events.push_back({tick, RawKind::kProgram, channel, data[0]});
    }
  }
  track.end_tick = tick;
  reader.skip_to(chunk_end);
  return track;
}

// Pairs note-ons with note-offs per channel and key. A re-triggered key
// closes the sounding note at the new onset.
void collect_notes(const RawTrack& raw, const TickConverter& clock, MultiTrackScore& out) {
  struct Open {
    bool active = false;
    std::uint64_t on = 0;
  };
  std::array<std::array<Open, 128>, 16> open{};
  std::array<int, 16> program{};
  std::array<std::optional<Track>, 16> by_channel;

  auto close = [&](int channel, int key, std::uint64_t off_tick) {
    Open& slot = open[static_cast<std::size_t>(channel)][static_cast<std::size_t>(key)];
    const Tick on = clock.convert(slot.on);
    const Tick off = clock.convert(off_tick);
    slot.active = false;
    if (off <= on) {
      ++out.dropped_notes;
      return;
    }
    by_channel[static_cast<std::size_t>(channel)]->notes.push_back({key, on, off});
  };

  for (const RawEvent& ev : raw.events) {
    const auto ch = static_cast<std::size_t>(ev.channel);
    switch (ev.kind) {
      case RawKind::kProgram:
        program[ch] = ev.data;
        break;
      case RawKind::kNoteOn: {
        if (!by_channel[ch]) {
          Track track;
          track.name = raw.name;
          track.program = program[ch];
          track.is_percussion = ev.channel == kPercussionChannel;
          by_channel[ch] = std::move(track);
        }
        Open& slot = open[ch][static_cast<std::size_t>(ev.data)];
        if (slot.active) {
          ++out.repaired_overlaps;
          close(ev.channel, ev.data, ev.tick);
        }
        slot.active = true;
        slot.on = ev.tick;
        break;
      }
      case RawKind::kNoteOff:
        if (open[ch][static_cast<std::size_t>(ev.data)].active) close(ev.channel, ev.data, ev.tick);
        break;
    }
  }
  for (int ch = 0; ch < 16; ++ch) {
    for (int key = 0; key < 128; ++key) {
      if (open[static_cast<std::size_t>(ch)][static_cast<std::size_t>(key)].active) {
        close(ch, key, raw.end_tick);
      }
    }
  }

  bool any = false;
  for (auto& track : by_channel) {
    if (!track) continue;
    any = true;
    std::sort(track->notes.begin(), track->notes.end(), [](const Note& a, const Note& b) {
      return std::tie(a.on, a.pitch, a.off) < std::tie(b.on, b.pitch, b.off);
    });
    out.tracks.push_back(std::move(*track));
  }
  if (!any && !raw.name.empty()) {
    Track empty;
    empty.name = raw.name;
    out.tracks.push_back(std::move(empty));
  }
}

class TrackWriter {
 public:
  void name(std::string_view text) {
    delta(0);
    meta(0x03, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  }

  void tempo(std::uint32_t micros) {
    delta(0);
    const std::array<std::uint8_t, 3> data{static_cast<std::uint8_t>(micros >> 16),
                                           static_cast<std::uint8_t>(micros >> 8),
                                           static_cast<std::uint8_t>(micros)};
    meta(0x51, data);
  }

  void program(Tick tick, int channel, int number) {
    advance(tick);
    bytes_.push_back(static_cast<std::uint8_t>(0xC0 | channel));
    bytes_.push_back(static_cast<std::uint8_t>(number));
  }

  void note(Tick tick, bool on, int channel, int key) {
    advance(tick);
    bytes_.push_back(static_cast<std::uint8_t>((on ? 0x90 : 0x80) | channel));
    bytes_.push_back(static_cast<std::uint8_t>(key));
    bytes_.push_back(static_cast<std::uint8_t>(on ? kNoteVelocity : 0));
  }

  void append_to(std::vector<std::uint8_t>& file) {
    delta(0);
    meta(0x2F, {});
    file.insert(file.end(), {'M', 'T', 'r', 'k'});
    put_u32(file, static_cast<std::uint32_t>(bytes_.size()));
    file.insert(file.end(), bytes_.begin(), bytes_.end());
  }

  static void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
  }

 private:
  // Deltas beyond the VLQ limit are bridged with empty text events.
  void advance(Tick tick) {
    Tick gap = tick - now_;
    while (gap > static_cast<Tick>(kMaxVlq)) {
      delta(kMaxVlq);
      meta(0x01, {});
      gap -= kMaxVlq;
    }
    delta(static_cast<std::uint32_t>(gap));
    now_ = tick;
  }

  void delta(std::uint32_t value) {
    std::array<std::uint8_t, 4> buf{};
    std::size_t n = 0;
    buf[n++] = value & 0x7F;
    while ((value >>= 7) != 0) buf[n++] = static_cast<std::uint8_t>(0x80 | (value & 0x7F));
    while (n > 0) bytes_.push_back(buf[--n]);
  }

  void meta(std::uint8_t type, std::span<const std::uint8_t> data) {
    bytes_.push_back(0xFF);
    bytes_.push_back(type);
    delta(static_cast<std::uint32_t>(data.size()));
    bytes_.insert(bytes_.end(), data.begin(), data.end());
  }

  std::vector<std::uint8_t> bytes_;
  Tick now_ = 0;
};

std::vector<std::uint8_t> header(std::uint16_t ntracks) {
  std::vector<std::uint8_t> file{'M', 'T', 'h', 'd', 0, 0, 0, 6, 0, 1};
  file.push_back(static_cast<std::uint8_t>(ntracks >> 8));
  file.push_back(static_cast<std::uint8_t>(ntracks));
  file.push_back(static_cast<std::uint8_t>(kOutputPpq >> 8));
  file.push_back(static_cast<std::uint8_t>(kOutputPpq & 0xFF));
  return file;
}

// Off events sort before on events at the same tick.
void write_notes(TrackWriter& writer, std::span<const Note> notes, int channel) {
  struct Ev {
    Tick tick;
    int on;
    int key;
  };
  std::vector<Ev> events;
  events.reserve(notes.size() * 2);
  for (const Note& n : notes) {
    events.push_back({n.on, 1, n.pitch});
    events.push_back({n.off, 0, n.pitch});
  }
  std::stable_sort(events.begin(), events.end(), [](const Ev& a, const Ev& b) {
    return std::tie(a.tick, a.on) < std::tie(b.tick, b.on);
  });
  for (const Ev& ev : events) writer.note(ev.tick, ev.on != 0, channel, ev.key);
}

}  // namespace

MultiTrackScore parse_midi(std::span<const std::uint8_t> bytes) {
  ByteReader reader(bytes);
  if (!reader.match("MThd")) throw MidiParseError(0, "missing MThd header");
  reader.take(4, "header");
  const std::uint32_t header_length = reader.u32("header length");
  if (header_length < 6) throw MidiParseError(4, "header length below 6");
  const std::size_t header_end = reader.offset() + header_length;
  const std::uint16_t format = reader.u16("format");
  const std::uint16_t ntracks = reader.u16("track count");
  const std::uint16_t division = reader.u16("division");
  if (format > 1) throw MidiParseError(8, "unsupported SMF format " + std::to_string(format));
  reader.require(header_end - reader.offset(), "header");
  reader.skip_to(header_end);

  std::vector<RawTrack> raw_tracks;
  std::vector<TempoChange> tempos;
  while (raw_tracks.size() < ntracks) {
    const std::size_t chunk_start = reader.offset();
    if (reader.remaining() == 0) {
      throw MidiParseError(chunk_start, "expected " + std::to_string(ntracks) + " tracks, found " +
                                            std::to_string(raw_tracks.size()));
    }
    reader.require(8, "chunk header");
    const bool is_track = reader.match("MTrk");
    reader.take(4, "chunk tag");
    const std::uint32_t length = reader.u32("chunk length");
    if (length > reader.remaining()) {
      throw MidiParseError(chunk_start, "chunk length " + std::to_string(length) + " exceeds file");
    }
    const std::size_t chunk_end = reader.offset() + length;
    if (!is_track) {
      reader.skip_to(chunk_end);
      continue;
    }
    raw_tracks.push_back(read_track(reader, chunk_end, tempos));
  }

  const TickConverter clock(division, std::move(tempos));
  MultiTrackScore mts;
  for (const RawTrack& raw : raw_tracks) collect_notes(raw, clock, mts);
  return mts;
}

Score load_nes_score(const MultiTrackScore& mts, const std::optional<VoiceMap>& voice_map) {
  std::array<std::vector<std::size_t>, kNumVoices> sources;

  if (voice_map) {
    for (const auto& [track, kind] : *voice_map) {
      if (track >= mts.tracks.size()) {
        throw ScoreError("voice map names track " + std::to_string(track) + " but the file has " +
                         std::to_string(mts.tracks.size()) + " tracks");
      }
      sources[index_of(kind)].push_back(track);
    }
  } else {
    bool by_name = true;
    bool any_named = false;
    for (std::size_t i = 0; i < mts.tracks.size() && by_name; ++i) {
      const Track& track = mts.tracks[i];
      const auto kind = voice_from_track_name(track.name);
      if (!kind) {
        if (!track.notes.empty()) by_name = false;
        continue;
      }
      if (!sources[index_of(*kind)].empty()) by_name = false;
      sources[index_of(*kind)].push_back(i);
      any_named = true;
    }
    if (!by_name || !any_named) {
      if (mts.tracks.size() != kNumVoices) {
        std::string names;
        for (const Track& track : mts.tracks) {
          names += names.empty() ? "" : ", ";
          names += "\"" + track.name + "\"";
        }
        throw ScoreError("cannot identify NES voices among " + std::to_string(mts.tracks.size()) +
                         " tracks [" + names + "]; name them p1/p2/tr/no or pass a voice map");
      }
      for (std::size_t i = 0; i < kNumVoices; ++i) sources[i] = {i};
    }
  }

  Score::Parts parts;
  for (std::size_t v = 0; v < kNumVoices; ++v) {
    for (std::size_t track : sources[v]) {
      const auto& notes = mts.tracks[track].notes;
      parts[v].insert(parts[v].end(), notes.begin(), notes.end());
    }
  }
  return Score(std::move(parts));
}

std::vector<std::uint8_t> write_midi(const Score& score) {
  std::vector<std::uint8_t> file = header(kNumVoices);
  static constexpr std::array<std::string_view, kNumVoices> kNames = {"p1", "p2", "tr", "no"};
  for (VoiceKind kind : kAllVoices) {
    TrackWriter writer;
    writer.name(kNames[index_of(kind)]);
    if (kind == VoiceKind::kP1) writer.tempo(kOutputTempo);
    write_notes(writer, score.notes(kind), static_cast<int>(index_of(kind)));
    writer.append_to(file);
  }
  return file;
}

std::vector<std::uint8_t> write_multitrack_midi(const MultiTrackScore& mts) {
  if (mts.tracks.size() > 0xFFFF) throw PreconditionError("too many tracks for one MIDI file");
  std::vector<std::uint8_t> file = header(static_cast<std::uint16_t>(std::max<std::size_t>(mts.tracks.size(), 1)));
  if (mts.tracks.empty()) {
    TrackWriter writer;
    writer.tempo(kOutputTempo);
    writer.append_to(file);
    return file;
  }
  int next_channel = 0;
  for (std::size_t i = 0; i < mts.tracks.size(); ++i) {
    const Track& track = mts.tracks[i];
    int channel = kPercussionChannel;
    if (!track.is_percussion) {
      if (next_channel == kPercussionChannel) ++next_channel;
      channel = next_channel;
      next_channel = (next_channel + 1) % 16;
    }
    for (const Note& n : track.notes) {
      if (n.pitch < 0 || n.pitch > 127 || n.on < 0 || n.off <= n.on) {
        throw PreconditionError("track " + std::to_string(i) + " holds an unwritable note");
      }
    }
    TrackWriter writer;
    if (!track.name.empty()) writer.name(track.name);
    if (i == 0) writer.tempo(kOutputTempo);
    if (!track.is_percussion) writer.program(0, channel, track.program & 0x7F);
    write_notes(writer, track.notes, channel);
    writer.append_to(file);
  }
  return file;
}

}  // namespace chipscore
