#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vprkit/descriptor.hpp"
#include "vprkit/image.hpp"

namespace vprkit {

struct HogParams {
  int cell_side = 16;
  int block_side = 16;
  int bins = 9;
  double epsilon = 1e-6;

  void validate() const;
};

struct GistParams {
  int scales = 4;
  int orientations = 8;  // per scale
  int grid = 4;

  void validate() const;
  std::size_t length() const noexcept {
    return static_cast<std::size_t>(grid) * grid * scales * orientations;
  }
};

struct CohogParams {
  /// Working side in pixels; 0 keeps the native input resolution.
  int internal_side = 0;
  int cell_side = 16;
  int bins = 8;
  /// Fraction of the maximum attainable patch entropy a region must reach.
  double entropy_threshold = 0.4;
  int patch_side = 16;
  double epsilon = 1e-6;

  void validate() const;
};

struct OrbParams {
  int max_features = 500;
  int fast_threshold = 20;  // on the 0..255 scale
  int pyramid_levels = 8;
  double scale_factor = 1.2;
  int patch_side = 31;
  /// Detections closer than this to a level border are dropped.
  int edge_threshold = 31;

  void validate() const;
};

/// The two ways ORB can be inapplicable to an image.
struct NoKeypoints {
  enum class Reason { image_smaller_than_patch, no_corners };
  Reason reason = Reason::no_corners;

  std::string message() const;
};

// ---- HOG ----------------------------------------------------------------

/// Throws ImageTooSmall when either side is below cell_side or block_side.
DenseDescriptor encode_hog(const GrayImage& image, const HogParams& params = {});

// ---- GIST ---------------------------------------------------------------

/// Frequency-domain gain for every (scale, orientation) filter, sized to a
/// width x height spectrum in FFT order (DC at index 0). Filters are stored
/// scale-major: index = scale * orientations + orientation.
std::vector<std::vector<double>> gist_filter_bank(int width, int height, const GistParams& params);

/// Whitening low-pass gain applied before contrast normalisation, same layout.
std::vector<double> gist_prefilter_gain(int width, int height);

/// Symmetric padding applied on every side before filtering.
int gist_padding(int width, int height) noexcept;

/// Throws ImageTooSmall below 8x8.
DenseDescriptor encode_gist(const GrayImage& image, const GistParams& params = {});

// ---- CoHOG --------------------------------------------------------------

struct EntropyPatch {
  PixelPoint origin;  // top-left
  double entropy = 0.0;
};

/// Shannon entropy (bits) of the 8-bit intensities of every non-overlapping
/// patch_side x patch_side window, row-major over the patch grid.
std::vector<EntropyPatch> entropy_map(const GrayImage& image, int patch_side);

/// log2 of the number of distinct levels a patch can hold.
double max_patch_entropy(int patch_side) noexcept;

/// Throws ImageTooSmall when either side is below patch_side.
RegionalDescriptor encode_cohog(const GrayImage& image, const CohogParams& params = {});

// ---- ORB ----------------------------------------------------------------

using OrbOutcome = std::variant<KeypointDescriptor, NoKeypoints>;

OrbOutcome encode_orb(const GrayImage& image, const OrbParams& params = {});

/// FAST-9 corner score at (x, y) of an 8-bit image: over every arc of 9
/// contiguous circle pixels, the smallest absolute difference to the centre
/// among arcs that are uniformly brighter or darker; the maximum of those
/// minima is returned. The pixel is a corner at threshold t iff score > t.
/// Requires a 3-pixel margin.
int fast9_score(const std::uint8_t* image, int stride, int x, int y) noexcept;

/// The compiled-in 256 point pairs (x1, y1, x2, y2) of the steered BRIEF test.
std::span<const std::array<int, 4>, 256> orb_pattern() noexcept;

// ---- Technique dispatch -------------------------------------------------

enum class Technique { hog, gist, cohog, orb };

inline constexpr std::array<Technique, 4> kAllTechniques = {Technique::hog, Technique::gist,
                                                            Technique::cohog, Technique::orb};

std::string_view to_string(Technique t) noexcept;
/// Throws InvalidArgument.
Technique parse_technique(std::string_view name);

struct TechniqueParams {
  HogParams hog;
  GistParams gist;
  CohogParams cohog;
  OrbParams orb;

  /// Applies `key=value` for `technique` (e.g. "cell_side=8"); a prefixed key
  /// like "orb.fast_threshold" addresses any technique. Throws InvalidArgument.
  void set(Technique technique, std::string_view assignment);
};

using EncodeOutcome = std::variant<Descriptor, NoKeypoints>;

/// Encoders raise ImageTooSmall; ORB inapplicability is returned as a value.
EncodeOutcome encode(Technique technique, const GrayImage& image,
                     const TechniqueParams& params = {});

}  // namespace vprkit
