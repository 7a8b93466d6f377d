// Session client: owns the hello/pose/end handshake, sequence numbering, and
// send throttling. The socket is injected so tests run against a fake and the
// page passes a browser WebSocket.

import {
  NoteMsg,
  ReadyMsg,
  SummaryMsg,
  endMsg,
  helloMsg,
  parseServerMsg,
  poseMsg,
} from "./protocol.js";

// the subset of WebSocket both browsers and the ws package implement;
// handler params are any so both event hierarchies assign cleanly
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev: any) => void) | null;
  onmessage: ((ev: any) => void) | null;
  onclose: ((ev: any) => void) | null;
  onerror: ((ev: any) => void) | null;
}

export interface SessionEvents {
  onReady?: (msg: ReadyMsg) => void;
  onNote?: (msg: NoteMsg) => void;
  onSummary?: (msg: SummaryMsg) => void;
  onError?: (message: string) => void;
  onClose?: () => void;
}

export type SessionState =
  | "connecting"
  | "ready"
  | "ended"
  | "closed"
  | "failed";

export class SessionClient {
  private seqCounter = 0;
  private lastSendAt = -Infinity;
  private stateValue: SessionState = "connecting";

  constructor(
    private socket: SocketLike,
    private events: SessionEvents = {},
    private minSendIntervalMs = 0,
    private now: () => number = () => Date.now(),
  ) {
    socket.onopen = () => this.socket.send(JSON.stringify(helloMsg()));
    socket.onmessage = (ev) => this.handleFrame(String(ev.data));
    socket.onclose = () => {
      if (this.stateValue !== "failed") this.stateValue = "closed";
      this.events.onClose?.();
    };
    socket.onerror = () => this.fail("socket error");
  }

  get state(): SessionState {
    return this.stateValue;
  }

  get seq(): number {
    return this.seqCounter;
  }

  /**
   * Send one pose frame. Returns false when the frame was dropped: session
   * not ready yet, already ended, or inside the throttle window. seq numbers
   * only advance on frames actually sent, so the stream stays gapless.
   */
  sendPose(coords: ArrayLike<number>): boolean {
    if (this.stateValue !== "ready") return false;
    const t = this.now();
    if (t - this.lastSendAt < this.minSendIntervalMs) return false;
    this.socket.send(JSON.stringify(poseMsg(this.seqCounter, coords)));
    this.seqCounter += 1;
    this.lastSendAt = t;
    return true;
  }

  /** Finish the session; the summary arrives via onSummary. */
  end(): void {
    if (this.stateValue !== "ready") return;
    this.stateValue = "ended";
    this.socket.send(JSON.stringify(endMsg()));
  }

  private fail(message: string): void {
    if (this.stateValue === "failed") return;
    this.stateValue = "failed";
    this.events.onError?.(message);
    this.socket.close();
  }

  private handleFrame(data: string): void {
    let msg;
    try {
      msg = parseServerMsg(data);
    } catch (err) {
      this.fail(err instanceof Error ? err.message : String(err));
      return;
    }
    switch (msg.type) {
      case "ready":
        this.stateValue = "ready";
        this.events.onReady?.(msg);
        break;
      case "note":
        this.events.onNote?.(msg);
        break;
      case "summary":
        this.events.onSummary?.(msg);
        this.socket.close();
        break;
      case "error":
        this.fail(msg.message);
        break;
    }
  }
}
