// COCO-18 pose layout and the normalization rule shared with the engine:
// pixel x maps to 2*x/width - 1, clamped to [-1, 1]; keypoints the estimator
// did not detect carry the previous frame's value forward (origin on frame 0).

export const POSE_DIM = 36;

// index order is the OpenPose COCO output order
export const COCO18 = [
  "nose",
  "neck",
  "right_shoulder",
  "right_elbow",
  "right_wrist",
  "left_shoulder",
  "left_elbow",
  "left_wrist",
  "right_hip",
  "right_knee",
  "right_ankle",
  "left_hip",
  "left_knee",
  "left_ankle",
  "right_eye",
  "left_eye",
  "right_ear",
  "left_ear",
] as const;

export type KeypointTriplet = [x: number, y: number, confidence: number];

export function clamp(v: number, lo = -1, hi = 1): number {
  return v < lo ? lo : v > hi ? hi : v;
}

/**
 * Map 18 (x_px, y_px, confidence) triplets to a normalized 36-vector.
 * Confidence 0 means "not detected": keep the previous frame's coords,
 * or (0, 0) when there is no previous frame.
 */
export function normalizeKeypoints(
  raw: KeypointTriplet[],
  imageW: number,
  imageH: number,
  prev?: Float64Array | null,
): Float64Array {
  if (imageW <= 0 || imageH <= 0) {
    throw new Error(`image dimensions must be positive, got ${imageW}x${imageH}`);
  }
  if (raw.length !== COCO18.length) {
    throw new Error(`expected ${COCO18.length} keypoints, got ${raw.length}`);
  }
  const out = new Float64Array(POSE_DIM);
  if (prev) out.set(prev);
  for (let i = 0; i < raw.length; i++) {
    const [x, y, conf] = raw[i];
    if (conf > 0) {
      out[2 * i] = clamp(2 * (x / imageW) - 1);
      out[2 * i + 1] = clamp(2 * (y / imageH) - 1);
    }
  }
  return out;
}

// MoveNet / PoseNet emit 17 keypoints and no neck. Index mapping into COCO-18,
// with the neck synthesized as the shoulder midpoint when both are visible:
//
//   MoveNet name      -> COCO-18 slot
//   nose (0)          -> nose (0)
//   left_eye (1)      -> left_eye (15)
//   right_eye (2)     -> right_eye (14)
//   left_ear (3)      -> left_ear (17)
//   right_ear (4)     -> right_ear (16)
//   left_shoulder (5) -> left_shoulder (5)
//   right_shoulder (6)-> right_shoulder (2)
//   left_elbow (7)    -> left_elbow (6)
//   right_elbow (8)   -> right_elbow (3)
//   left_wrist (9)    -> left_wrist (7)
//   right_wrist (10)  -> right_wrist (4)
//   left_hip (11)     -> left_hip (11)
//   right_hip (12)    -> right_hip (8)
//   left_knee (13)    -> left_knee (12)
//   right_knee (14)   -> right_knee (9)
//   left_ankle (15)   -> left_ankle (13)
//   right_ankle (16)  -> right_ankle (10)
export const MOVENET_TO_COCO18: ReadonlyArray<number> = [
  0, 15, 14, 17, 16, 5, 2, 6, 3, 7, 4, 11, 8, 12, 9, 13, 10,
];

/** Reorder 17 MoveNet triplets into COCO-18 order, synthesizing the neck. */
export function movenetToCoco18(points: KeypointTriplet[]): KeypointTriplet[] {
  if (points.length !== 17) {
    throw new Error(`expected 17 MoveNet keypoints, got ${points.length}`);
  }
  const out: KeypointTriplet[] = new Array(18).fill(null).map(() => [0, 0, 0]);
  for (let i = 0; i < 17; i++) {
    out[MOVENET_TO_COCO18[i]] = [...points[i]];
  }
  const ls = points[5];
  const rs = points[6];
  if (ls[2] > 0 && rs[2] > 0) {
    out[1] = [(ls[0] + rs[0]) / 2, (ls[1] + rs[1]) / 2, Math.min(ls[2], rs[2])];
  }
  return out;
}

// Neutral standing figure in normalized coords, arms slightly out. This is
// what the virtual dancer emits when the pointer sits at canvas center.
// y grows downward (screen convention), matching the pixel rule above.
export const REST_POSE: ReadonlyArray<number> = [
  0.0, -0.78, // nose
  0.0, -0.6, // neck
  -0.18, -0.58, // right shoulder
  -0.26, -0.3, // right elbow
  -0.3, -0.04, // right wrist
  0.18, -0.58, // left shoulder
  0.26, -0.3, // left elbow
  0.3, -0.04, // left wrist
  -0.12, -0.04, // right hip
  -0.14, 0.36, // right knee
  -0.15, 0.76, // right ankle
  0.12, -0.04, // left hip
  0.14, 0.36, // left knee
  0.15, 0.76, // left ankle
  -0.05, -0.84, // right eye
  0.05, -0.84, // left eye
  -0.11, -0.8, // right ear
  0.11, -0.8, // left ear
];
