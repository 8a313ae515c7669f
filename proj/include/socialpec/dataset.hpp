#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "socialpec/scene.hpp"

namespace socialpec {

// One line of an annotation file: pedestrian ped_id is at (x, y) meters in
// frame frame_id. Frames are annotated at a constant 0.4 s interval.
struct AnnotationRecord {
  std::int64_t frame_id = 0;
  std::int64_t ped_id = 0;
  double x = 0.0;
  double y = 0.0;
};

// Parses "frame ped x y" whitespace-delimited lines. Records come back
// sorted by (frame, ped); duplicates of the same (frame, ped) are rejected.
std::vector<AnnotationRecord> load_annotations(std::istream& in);
std::vector<AnnotationRecord> load_annotation_file(const std::string& path);

// Slides a t_total-frame window over the set at the given stride (in frame
// steps). A pedestrian joins a window only when observed at all t_total
// consecutive frames; windows without any such pedestrian are dropped.
// The set's frame ids must form an arithmetic progression.
std::vector<SceneWindow> build_windows(const std::vector<AnnotationRecord>& records,
                                       std::size_t t_total, std::size_t stride,
                                       std::size_t t_obs = 8);

// Splits a record list into maximal constant-spacing runs (spacing taken
// from the smallest gap), for files with dropped frames.
std::vector<std::vector<AnnotationRecord>> split_on_frame_gaps(
    const std::vector<AnnotationRecord>& records);

struct NamedWindows {
  std::string name;
  std::vector<SceneWindow> windows;
};

struct DatasetSplit {
  std::vector<SceneWindow> train;
  std::vector<SceneWindow> val;
  std::vector<SceneWindow> test;
  std::string test_set_name;
};

// Leave-one-out protocol: every window of test_name becomes the test set;
// the remaining windows are shuffled with the seed and divided so that
// val_fraction of them validate.
DatasetSplit split_leave_one_out(const std::vector<NamedWindows>& sets,
                                 const std::string& test_name, double val_fraction,
                                 std::uint64_t seed);

}  // namespace socialpec
