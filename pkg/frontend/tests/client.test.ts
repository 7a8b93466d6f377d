import { describe, expect, it } from "vitest";
import { SessionClient, SocketLike } from "../src/client.js";
import { NoteMsg, SummaryMsg } from "../src/protocol.js";

class FakeSocket implements SocketLike {
  sent: string[] = [];
  closed = false;
  onopen: ((ev: any) => void) | null = null;
  onmessage: ((ev: any) => void) | null = null;
  onclose: ((ev: any) => void) | null = null;
  onerror: ((ev: any) => void) | null = null;

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
    this.onclose?.({});
  }

  open(): void {
    this.onopen?.({});
  }

  receive(obj: unknown): void {
    this.onmessage?.({ data: JSON.stringify(obj) });
  }
}

const READY = { type: "ready", session_id: "s1", k: 6, fps: 30, generator: "online" };

function readyClient(events = {}, throttleMs = 0, now?: () => number) {
  const sock = new FakeSocket();
  const client = new SessionClient(sock, events, throttleMs, now);
  sock.open();
  sock.receive(READY);
  return { sock, client };
}

const pose = new Array(36).fill(0.1);

describe("SessionClient", () => {
  it("sends hello when the socket opens", () => {
    const sock = new FakeSocket();
    const client = new SessionClient(sock);
    expect(client.state).toBe("connecting");
    sock.open();
    expect(JSON.parse(sock.sent[0])).toEqual({
      type: "hello",
      k: 6,
      fps: 30,
      generator: "online",
    });
  });

  it("drops poses until the server says ready", () => {
    const sock = new FakeSocket();
    const client = new SessionClient(sock);
    sock.open();
    expect(client.sendPose(pose)).toBe(false);
    expect(sock.sent).toHaveLength(1); // hello only
    sock.receive(READY);
    expect(client.state).toBe("ready");
    expect(client.sendPose(pose)).toBe(true);
  });

  it("numbers frames gaplessly from 0", () => {
    const { sock, client } = readyClient();
    for (let i = 0; i < 5; i++) client.sendPose(pose);
    const seqs = sock.sent.slice(1).map((s) => JSON.parse(s).seq);
    expect(seqs).toEqual([0, 1, 2, 3, 4]);
    expect(client.seq).toBe(5);
  });

  it("throttles to the configured rate without burning seq numbers", () => {
    let t = 1000;
    const { sock, client } = readyClient({}, 33, () => t);
    expect(client.sendPose(pose)).toBe(true);
    t += 10;
    expect(client.sendPose(pose)).toBe(false); // too soon, dropped
    t += 25;
    expect(client.sendPose(pose)).toBe(true);
    const seqs = sock.sent.slice(1).map((s) => JSON.parse(s).seq);
    expect(seqs).toEqual([0, 1]);
  });

  it("routes notes and plays the summary back", () => {
    const notes: NoteMsg[] = [];
    let summary: SummaryMsg | null = null;
    const { sock } = readyClient({
      onNote: (n: NoteMsg) => notes.push(n),
      onSummary: (s: SummaryMsg) => (summary = s),
    });
    sock.receive({ type: "note", index: 0, ordinal: 2, midi: 64, at_frame: 6 });
    sock.receive({ type: "summary", notes: [2], correlation: 0.0 });
    expect(notes).toHaveLength(1);
    expect(notes[0].midi).toBe(64);
    expect(summary!.notes).toEqual([2]);
    expect(sock.closed).toBe(true); // summary finishes the session
  });

  it("end() sends the end frame and stops pose sending", () => {
    const { sock, client } = readyClient();
    client.sendPose(pose);
    client.end();
    expect(JSON.parse(sock.sent.at(-1)!)).toEqual({ type: "end" });
    expect(client.state).toBe("ended");
    expect(client.sendPose(pose)).toBe(false);
  });

  it("surfaces server error frames and closes cleanly", () => {
    const errors: string[] = [];
    const { sock, client } = readyClient({ onError: (m: string) => errors.push(m) });
    sock.receive({ type: "error", message: "expected seq 3" });
    expect(errors).toEqual(["expected seq 3"]);
    expect(client.state).toBe("failed");
    expect(sock.closed).toBe(true);
  });

  it("treats unparseable frames as failures", () => {
    const errors: string[] = [];
    const sock = new FakeSocket();
    new SessionClient(sock, { onError: (m: string) => errors.push(m) });
    sock.open();
    sock.onmessage?.({ data: "garbage" });
    expect(errors).toHaveLength(1);
    expect(sock.closed).toBe(true);
  });

  it("fires onClose exactly once on normal closure", () => {
    let closes = 0;
    const { sock, client } = readyClient({ onClose: () => closes++ });
    sock.close();
    expect(closes).toBe(1);
    expect(client.state).toBe("closed");
  });
});
