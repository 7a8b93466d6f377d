// Full loop against the real engine: spawn the Python server with the
// committed model, replay the recorded pointer track through the virtual
// dancer and the session client, and compare the notes to the stored fixture.
// Run with UPDATE_NOTE_FIXTURE=1 to re-record fixtures/expected_notes.json.

import { spawn, ChildProcess } from "node:child_process";
import { readFileSync, writeFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import path from "node:path";
import WebSocket from "ws";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { SessionClient } from "../src/client.js";
import { replayTrack } from "../src/dancer.js";
import { NoteMsg, SummaryMsg } from "../src/protocol.js";

const here = path.dirname(fileURLToPath(import.meta.url));
const fixtures = path.join(here, "..", "fixtures");
const PORT = 8791;
const UPDATE = process.env.UPDATE_NOTE_FIXTURE === "1";

let server: ChildProcess | null = null;

async function waitForHealthz(timeoutMs = 20000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    try {
      const res = await fetch(`http://127.0.0.1:${PORT}/healthz`);
      if (res.ok) return;
    } catch {
      // server not up yet
    }
    if (Date.now() > deadline) throw new Error("server did not come up");
    await new Promise((r) => setTimeout(r, 250));
  }
}

beforeAll(async () => {
  server = spawn(
    "dancenotes",
    ["serve", "--model", path.join(fixtures, "model.bin"), "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForHealthz();
}, 30000);

afterAll(() => {
  server?.kill();
});

interface SessionResult {
  notes: NoteMsg[];
  summary: SummaryMsg;
}

function runSession(poses: Float64Array[]): Promise<SessionResult> {
  return new Promise((resolve, reject) => {
    const notes: NoteMsg[] = [];
    let summary: SummaryMsg | null = null;
    const socket = new WebSocket(`ws://127.0.0.1:${PORT}/v1/session`);
    const client: SessionClient = new SessionClient(socket as never, {
      onReady: () => {
        for (const pose of poses) {
          if (!client.sendPose(pose)) {
            reject(new Error("pose frame dropped during replay"));
            return;
          }
        }
        client.end();
      },
      onNote: (msg) => notes.push(msg),
      onSummary: (msg) => (summary = msg),
      onError: (message) => reject(new Error(message)),
      onClose: () => {
        if (summary) resolve({ notes, summary });
        else reject(new Error("socket closed before the summary"));
      },
    });
  });
}

describe("virtual dancer end to end", () => {
  it("replays the recorded track into the fixture note sequence", async () => {
    const doc = JSON.parse(readFileSync(path.join(fixtures, "pointer_track.json"), "utf8"));
    const track = (doc.samples as [number, number][]).map(([x, y]) => ({ x, y }));
    expect(track).toHaveLength(360);

    const poses = replayTrack(track);
    const { notes, summary } = await runSession(poses);

    // one note per 6 frames, anchored on E4
    expect(notes).toHaveLength(60);
    expect(notes[0].ordinal).toBe(2);
    expect(notes[0].midi).toBe(64);
    expect(notes[0].at_frame).toBe(6);
    const ordinals = notes.map((n) => n.ordinal);
    expect(summary.notes).toEqual(ordinals);
    expect(Number.isFinite(summary.correlation)).toBe(true);

    const fixturePath = path.join(fixtures, "expected_notes.json");
    if (UPDATE) {
      writeFileSync(
        fixturePath,
        JSON.stringify({ notes: ordinals, correlation: summary.correlation }) + "\n",
      );
      console.log("fixture updated:", ordinals.join(""));
      return;
    }
    const expected = JSON.parse(readFileSync(fixturePath, "utf8"));
    expect(ordinals).toEqual(expected.notes);
    expect(summary.correlation).toBeCloseTo(expected.correlation, 9);
  }, 30000);

  it("replays deterministically: a second session yields identical notes", async () => {
    const doc = JSON.parse(readFileSync(path.join(fixtures, "pointer_track.json"), "utf8"));
    const track = (doc.samples as [number, number][]).map(([x, y]) => ({ x, y }));
    const a = await runSession(replayTrack(track));
    const b = await runSession(replayTrack(track));
    expect(a.notes.map((n) => n.ordinal)).toEqual(b.notes.map((n) => n.ordinal));
    expect(a.summary.correlation).toBe(b.summary.correlation);
  }, 30000);
});
