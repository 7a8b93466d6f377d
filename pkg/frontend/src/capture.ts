// Capture sources. Both modes emit exactly one 36-vector per tick with every
// value in [-1, 1]; the page picks one via ?mode=.

import { VirtualDancer } from "./dancer.js";
import {
  KeypointTriplet,
  POSE_DIM,
  movenetToCoco18,
  normalizeKeypoints,
} from "./pose.js";

export interface Capture {
  tick(): Float64Array;
}

/** Virtual-dancer mode: follows a live pointer position. */
export class PointerCapture implements Capture {
  private dancer = new VirtualDancer();
  x = 0.5;
  y = 0.5;

  tick(): Float64Array {
    return this.dancer.tick(this.x, this.y);
  }
}

/**
 * Webcam mode: wraps an in-browser pose estimator that returns 17 MoveNet
 * keypoints in pixels, or null when no person is in frame. No person means
 * the previous frame repeats (zeros before the first detection), same rule
 * the engine applies to estimator dropouts.
 */
export class WebcamCapture implements Capture {
  private prev: Float64Array | null = null;

  constructor(
    private estimate: () => KeypointTriplet[] | null,
    private width: number,
    private height: number,
  ) {}

  tick(): Float64Array {
    const points = this.estimate();
    if (points === null) {
      return this.prev ? this.prev.slice() : new Float64Array(POSE_DIM);
    }
    const pose = normalizeKeypoints(
      movenetToCoco18(points),
      this.width,
      this.height,
      this.prev,
    );
    this.prev = pose;
    return pose.slice();
  }
}
