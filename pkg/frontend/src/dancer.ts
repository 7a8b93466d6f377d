// Virtual dancer: a deterministic pointer-to-stick-figure mapping so the full
// loop runs without a camera. Pointer position leans and crouches the figure,
// pointer velocity swings the limbs; the center of the canvas is the rest
// pose exactly. Same track in, same pose stream out, always.

import { POSE_DIM, REST_POSE, clamp } from "./pose.js";

export interface PointerSample {
  x: number; // 0..1 across the canvas, left to right
  y: number; // 0..1 down the canvas
}

// how strongly per-tick pointer deltas drive the limb swing
const VEL_GAIN = 8;

// basis vectors, one weight pair (x, y) per COCO-18 keypoint:
// nose neck rsho relb rwri lsho lelb lwri rhip rkne rank lhip lkne lank reye leye rear lear

// lean: upper body follows the pointer horizontally, feet stay planted
const LEAN_X = [
  0.5, 0.45, 0.42, 0.38, 0.35, 0.42, 0.38, 0.35, 0.2, 0.1, 0.0, 0.2, 0.1, 0.0,
  0.5, 0.5, 0.5, 0.5,
];

// crouch: pointer low squats the figure, knees push outward
const CROUCH_Y = [
  0.3, 0.28, 0.26, 0.2, 0.12, 0.26, 0.2, 0.12, 0.22, 0.06, 0.0, 0.22, 0.06,
  0.0, 0.3, 0.3, 0.3, 0.3,
];
const CROUCH_KNEE_X = new Map<number, number>([
  [9, -0.1], // right knee out
  [12, 0.1], // left knee out
]);

// swing: horizontal velocity throws the arms in opposition
const SWING_X = [
  0.0, 0.0, -0.25, -0.45, -0.6, 0.25, 0.45, 0.6, 0.0, 0.05, 0.0, 0.0, -0.05,
  0.0, 0.0, 0.0, 0.0, 0.0,
];

// bounce: vertical velocity bobs the arms and torso
const BOUNCE_Y = [
  0.15, 0.15, 0.2, 0.35, 0.5, 0.2, 0.35, 0.5, 0.1, 0.0, 0.0, 0.1, 0.0, 0.0,
  0.15, 0.15, 0.15, 0.15,
];

/** Pure mapping: centered pointer offset + velocity to a clamped 36-vector. */
export function poseFromPointer(
  dx: number,
  dy: number,
  vx: number,
  vy: number,
): Float64Array {
  const out = new Float64Array(POSE_DIM);
  for (let i = 0; i < 18; i++) {
    let x = REST_POSE[2 * i] + dx * LEAN_X[i] + vx * SWING_X[i];
    let y = REST_POSE[2 * i + 1] + dy * CROUCH_Y[i] + vy * BOUNCE_Y[i];
    const kneeX = CROUCH_KNEE_X.get(i);
    if (kneeX !== undefined && dy > 0) x += dy * kneeX;
    out[2 * i] = clamp(x);
    out[2 * i + 1] = clamp(y);
  }
  return out;
}

export class VirtualDancer {
  private prevX = 0.5;
  private prevY = 0.5;

  /** One capture tick: pointer in canvas coords (0..1), returns a 36-vector. */
  tick(x: number, y: number): Float64Array {
    const px = clamp(x, 0, 1);
    const py = clamp(y, 0, 1);
    const vx = clamp(VEL_GAIN * (px - this.prevX));
    const vy = clamp(VEL_GAIN * (py - this.prevY));
    this.prevX = px;
    this.prevY = py;
    return poseFromPointer(2 * px - 1, 2 * py - 1, vx, vy);
  }

  reset(): void {
    this.prevX = 0.5;
    this.prevY = 0.5;
  }
}

/** Replay a recorded pointer track from the rest state, one pose per sample. */
export function replayTrack(track: PointerSample[]): Float64Array[] {
  const dancer = new VirtualDancer();
  return track.map((s) => dancer.tick(s.x, s.y));
}
