#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "shadowkit/image.hpp"

namespace shadowkit::io {

namespace fs = std::filesystem;

// --- PNG ---------------------------------------------------------------
// 8-bit only. Reading maps v -> v/255; writing maps x -> round_half_even(255 x)
// clamped to [0,255], so any 8-bit-representable image round-trips exactly.

ImageRGB read_png_rgb(const fs::path& path);
/// Grayscale read of the first channel; values v/255.
GrayImage read_png_gray(const fs::path& path);
/// Mask read binarized at 8-bit value >= 128.
ShadowMask read_png_mask(const fs::path& path);

void write_png_rgb(const fs::path& path, const Grid<Rgb>& img);
void write_png_gray(const fs::path& path, const GrayImage& img);
/// Binary masks are written as {0, 255}.
void write_png_mask(const fs::path& path, const Grid<std::uint8_t>& mask);

std::uint8_t to_byte(double v) noexcept;

// --- Triplets ----------------------------------------------------------

struct Triplet {
  ImageRGB shadow_img;
  ShadowMask mask;
  ImageRGB free_img;
  std::string id;

  void validate() const;
  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// istd:  <root>/A/<name>.png (shadow), B/<name>.png (mask), C/<name>.png (free)
/// pairs: flat <root>/<id>_shadow.png, <id>_mask.png, <id>_free.png
enum class Layout { istd, pairs };

struct LoadIssue {
  std::string id;
  std::string message;
};

struct LoadResult {
  std::vector<Triplet> triplets;  ///< sorted by id
  std::vector<LoadIssue> report;
};

LoadResult load_triplets(const fs::path& root, Layout layout);

// --- Manifest ----------------------------------------------------------

/// Lazy reference to a triplet on disk. Paths are relative to the manifest.
struct TripletRef {
  std::string id;
  std::string shadow_path;
  std::string mask_path;
  std::string free_path;
  int width = 0;
  int height = 0;

  friend bool operator==(const TripletRef&, const TripletRef&) = default;
};

inline constexpr const char* kManifestHeader = "# shadowkit-manifest v1";

void write_manifest(const std::vector<TripletRef>& refs, const fs::path& path);
/// Throws ValidationError naming the offending line on malformed records.
/// Referenced files are not touched.
std::vector<TripletRef> read_manifest(const fs::path& path);

/// Loads every referenced triplet; missing or unreadable files become
/// report entries.
LoadResult load_manifest(const fs::path& path);

/// Writes triplets in istd layout under `dir` plus `dir/manifest.txt`,
/// returning the references written.
std::vector<TripletRef> save_triplets(const std::vector<Triplet>& triplets, const fs::path& dir);

}  // namespace shadowkit::io
