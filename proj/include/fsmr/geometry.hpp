#pragma once

namespace fsmr {

/// How source and target sample positions line up along one axis.
///
/// align_corners: first and last samples coincide, x_t = x_s (W_t - 1) / (W_s - 1).
/// half_pixel: pixel centres scale about the image centre, x_t = (x_s + 0.5) W_t / W_s - 0.5.
enum class Convention { align_corners, half_pixel };

/// Position in a `to`-length axis of sample `pos` of a `from`-length axis.
[[nodiscard]] inline double map_coordinate(double pos, int from, int to, Convention convention) {
    if (convention == Convention::half_pixel) {
        return (pos + 0.5) * to / from - 0.5;
    }
    if (from == 1) {
        return 0.0;
    }
    return pos * (to - 1) / (from - 1);
}

}  // namespace fsmr
