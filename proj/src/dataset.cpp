#include "socialpec/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "socialpec/rng.hpp"

namespace socialpec {

std::vector<AnnotationRecord> load_annotations(std::istream& in) {
  std::vector<AnnotationRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::istringstream fields(line);
    double frame = 0.0, ped = 0.0;
    AnnotationRecord rec;
    if (!(fields >> frame >> ped >> rec.x >> rec.y)) {
      throw ParseError("annotation line " + std::to_string(line_no) +
                       ": expected 'frame ped x y', got \"" + line + "\"");
    }
    std::string rest;
    if (fields >> rest) {
      throw ParseError("annotation line " + std::to_string(line_no) + ": trailing field \"" +
                       rest + "\"");
    }
    if (!std::isfinite(rec.x) || !std::isfinite(rec.y)) {
      throw ParseError("annotation line " + std::to_string(line_no) + ": non-finite coordinates");
    }
    // The common preprocessed files store ids as "123.0".
    rec.frame_id = static_cast<std::int64_t>(std::llround(frame));
    rec.ped_id = static_cast<std::int64_t>(std::llround(ped));
    records.push_back(rec);
  }
  std::sort(records.begin(), records.end(), [](const AnnotationRecord& a,
                                               const AnnotationRecord& b) {
    return a.frame_id != b.frame_id ? a.frame_id < b.frame_id : a.ped_id < b.ped_id;
  });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].frame_id == records[i - 1].frame_id &&
        records[i].ped_id == records[i - 1].ped_id) {
      throw DataError("duplicate annotation for pedestrian " + std::to_string(records[i].ped_id) +
                      " in frame " + std::to_string(records[i].frame_id));
    }
  }
  return records;
}

std::vector<AnnotationRecord> load_annotation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open annotation file: " + path);
  }
  return load_annotations(in);
}

namespace {

std::vector<std::int64_t> unique_frames(const std::vector<AnnotationRecord>& records) {
  std::vector<std::int64_t> frames;
  for (const AnnotationRecord& r : records) {
    if (frames.empty() || frames.back() != r.frame_id) frames.push_back(r.frame_id);
  }
  return frames;
}

}  // namespace

std::vector<SceneWindow> build_windows(const std::vector<AnnotationRecord>& records_in,
                                       std::size_t t_total, std::size_t stride,
                                       std::size_t t_obs) {
  if (t_total < 1 || stride < 1 || t_obs > t_total) {
    throw InvalidInputError("build_windows: need t_total >= 1, stride >= 1, t_obs <= t_total");
  }
  std::vector<SceneWindow> windows;
  if (records_in.empty()) return windows;

  // Canonicalize: windowing must not depend on input order.
  std::vector<AnnotationRecord> records = records_in;
  std::sort(records.begin(), records.end(), [](const AnnotationRecord& a,
                                               const AnnotationRecord& b) {
    return a.frame_id != b.frame_id ? a.frame_id < b.frame_id : a.ped_id < b.ped_id;
  });

  const std::vector<std::int64_t> frames = unique_frames(records);
  for (std::size_t i = 2; i < frames.size(); ++i) {
    if (frames[i] - frames[i - 1] != frames[1] - frames[0]) {
      throw DataError("non-constant frame spacing: " + std::to_string(frames[i - 1]) + " -> " +
                      std::to_string(frames[i]) + " vs step " +
                      std::to_string(frames[1] - frames[0]));
    }
  }
  if (frames.size() < t_total) return windows;

  // frame index -> position in `frames`, pedestrian -> per-frame location
  std::map<std::int64_t, std::size_t> frame_pos;
  for (std::size_t i = 0; i < frames.size(); ++i) frame_pos[frames[i]] = i;
  struct Track {
    std::vector<std::size_t> frame_indices;  // ascending
    std::vector<State> states;
  };
  std::map<std::int64_t, Track> tracks;
  for (const AnnotationRecord& r : records) {
    Track& tr = tracks[r.ped_id];
    tr.frame_indices.push_back(frame_pos[r.frame_id]);
    tr.states.push_back({r.x, r.y});
  }

  for (std::size_t start = 0; start + t_total <= frames.size(); start += stride) {
    std::vector<std::int64_t> ids;
    std::vector<std::vector<State>> trajs;
    for (const auto& [ped_id, tr] : tracks) {
      // Find the window's start frame in this pedestrian's track; presence at
      // all t_total frames means t_total consecutive indices from there.
      auto it = std::lower_bound(tr.frame_indices.begin(), tr.frame_indices.end(), start);
      std::size_t offset = static_cast<std::size_t>(it - tr.frame_indices.begin());
      if (it == tr.frame_indices.end() || *it != start) continue;
      if (offset + t_total > tr.frame_indices.size()) continue;
      if (tr.frame_indices[offset + t_total - 1] != start + t_total - 1) continue;
      ids.push_back(ped_id);
      trajs.emplace_back(tr.states.begin() + static_cast<std::ptrdiff_t>(offset),
                         tr.states.begin() + static_cast<std::ptrdiff_t>(offset + t_total));
    }
    if (ids.empty()) continue;
    SceneWindow w(ids.size(), t_total, t_obs);
    w.ped_ids = ids;
    w.start_frame = frames[start];
    for (std::size_t m = 0; m < ids.size(); ++m) {
      for (std::size_t t = 0; t < t_total; ++t) w.set(m, t, trajs[m][t]);
    }
    windows.push_back(std::move(w));
  }
  return windows;
}

std::vector<std::vector<AnnotationRecord>> split_on_frame_gaps(
    const std::vector<AnnotationRecord>& records) {
  std::vector<std::vector<AnnotationRecord>> segments;
  if (records.empty()) return segments;
  const std::vector<std::int64_t> frames = unique_frames(records);
  std::int64_t step = 0;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    std::int64_t d = frames[i] - frames[i - 1];
    if (step == 0 || d < step) step = d;
  }
  if (step == 0) {
    segments.push_back(records);
    return segments;
  }
  // Cut wherever the spacing exceeds the base step.
  std::vector<std::int64_t> cut_after;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i] - frames[i - 1] != step) cut_after.push_back(frames[i - 1]);
  }
  segments.emplace_back();
  std::size_t cut = 0;
  for (const AnnotationRecord& r : records) {
    while (cut < cut_after.size() && r.frame_id > cut_after[cut]) {
      ++cut;
      segments.emplace_back();
    }
    segments.back().push_back(r);
  }
  return segments;
}

DatasetSplit split_leave_one_out(const std::vector<NamedWindows>& sets,
                                 const std::string& test_name, double val_fraction,
                                 std::uint64_t seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw ConfigError("split: val_fraction must lie in (0, 1)");
  }
  DatasetSplit split;
  split.test_set_name = test_name;
  std::vector<SceneWindow> rest;
  bool found = false;
  for (const NamedWindows& set : sets) {
    if (set.name == test_name) {
      found = true;
      split.test.insert(split.test.end(), set.windows.begin(), set.windows.end());
    } else {
      rest.insert(rest.end(), set.windows.begin(), set.windows.end());
    }
  }
  if (!found) {
    throw ConfigError("split: unknown test set \"" + test_name + "\"");
  }
  RngStream rng = RngStream::keyed({seed, 0x73706c6974ull});  // "split"
  shuffle(rest, rng);
  const std::size_t val_count =
      static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(rest.size())));
  split.val.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(val_count));
  split.train.assign(rest.begin() + static_cast<std::ptrdiff_t>(val_count), rest.end());
  return split;
}

}  // namespace socialpec
