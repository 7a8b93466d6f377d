// Wire schema for the streaming session. Mirrors the server exactly; every
// frame on the socket is a JSON text message with a "type" field.

export const K = 6;
export const FPS = 30;
export const POSE_DIM = 36;
export const PENTATONIC_MIDI = [60, 62, 64, 67, 69];

export interface HelloMsg {
  type: "hello";
  k: number;
  fps: number;
  generator: "online";
}

export interface PoseMsg {
  type: "pose";
  seq: number;
  coords: number[];
}

export interface EndMsg {
  type: "end";
}

export type ClientMsg = HelloMsg | PoseMsg | EndMsg;

export interface ReadyMsg {
  type: "ready";
  session_id: string;
  k: number;
  fps: number;
  generator: string;
}

export interface NoteMsg {
  type: "note";
  index: number;
  ordinal: number;
  midi: number;
  at_frame: number;
}

export interface SummaryMsg {
  type: "summary";
  notes: number[];
  correlation: number;
}

export interface ErrorMsg {
  type: "error";
  message: string;
}

export type ServerMsg = ReadyMsg | NoteMsg | SummaryMsg | ErrorMsg;

export function helloMsg(): HelloMsg {
  return { type: "hello", k: K, fps: FPS, generator: "online" };
}

export function poseMsg(seq: number, coords: ArrayLike<number>): PoseMsg {
  if (coords.length !== POSE_DIM) {
    throw new Error(`pose must have ${POSE_DIM} coords, got ${coords.length}`);
  }
  return { type: "pose", seq, coords: Array.from(coords) };
}

export function endMsg(): EndMsg {
  return { type: "end" };
}

function requireNumber(obj: Record<string, unknown>, field: string): number {
  const v = obj[field];
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new Error(`server message missing numeric "${field}"`);
  }
  return v;
}

/** Parse and validate one server frame; throws on anything off-schema. */
export function parseServerMsg(data: string): ServerMsg {
  let obj: unknown;
  try {
    obj = JSON.parse(data);
  } catch {
    throw new Error("server sent non-JSON frame");
  }
  if (typeof obj !== "object" || obj === null) {
    throw new Error("server frame is not an object");
  }
  const msg = obj as Record<string, unknown>;
  switch (msg.type) {
    case "ready":
      if (typeof msg.session_id !== "string") {
        throw new Error('ready message missing "session_id"');
      }
      return {
        type: "ready",
        session_id: msg.session_id,
        k: requireNumber(msg, "k"),
        fps: requireNumber(msg, "fps"),
        generator: String(msg.generator),
      };
    case "note": {
      const ordinal = requireNumber(msg, "ordinal");
      if (ordinal < 0 || ordinal > 4 || !Number.isInteger(ordinal)) {
        throw new Error(`note ordinal out of range: ${ordinal}`);
      }
      return {
        type: "note",
        index: requireNumber(msg, "index"),
        ordinal,
        midi: requireNumber(msg, "midi"),
        at_frame: requireNumber(msg, "at_frame"),
      };
    }
    case "summary": {
      const notes = msg.notes;
      if (!Array.isArray(notes) || notes.some((n) => typeof n !== "number")) {
        throw new Error('summary message missing "notes" array');
      }
      return {
        type: "summary",
        notes: notes as number[],
        correlation: requireNumber(msg, "correlation"),
      };
    }
    case "error":
      return { type: "error", message: String(msg.message ?? "unknown error") };
    default:
      throw new Error(`unknown server message type: ${String(msg.type)}`);
  }
}
