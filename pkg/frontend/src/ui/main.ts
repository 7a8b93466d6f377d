// Page wiring: capture loop at 30 fps, session client over a browser
// WebSocket, oscillator playback, stick figure + note lane + piano roll.
// Configure with ?server=ws://host:port and ?mode=virtual-dancer|webcam-pose.

import { NotePlayer } from "../audio.js";
import { Capture, PointerCapture, WebcamCapture } from "../capture.js";
import { SessionClient } from "../client.js";
import { FPS, NoteMsg, PENTATONIC_MIDI } from "../protocol.js";
import { KeypointTriplet } from "../pose.js";

const params = new URLSearchParams(location.search);
const serverUrl = params.get("server") ?? `ws://${location.hostname || "127.0.0.1"}:8000`;
const mode = params.get("mode") ?? "virtual-dancer";

const stage = document.getElementById("stage") as HTMLCanvasElement;
const roll = document.getElementById("roll") as HTMLCanvasElement;
const lane = document.getElementById("lane") as HTMLDivElement;
const status = document.getElementById("status") as HTMLSpanElement;
const banner = document.getElementById("banner") as HTMLDivElement;
const summaryEl = document.getElementById("summary") as HTMLDivElement;
const startBtn = document.getElementById("start") as HTMLButtonElement;
const stopBtn = document.getElementById("stop") as HTMLButtonElement;

const player = new NotePlayer();
const pointer = new PointerCapture();
let capture: Capture = pointer;
let client: SessionClient | null = null;
let loop: ReturnType<typeof setInterval> | null = null;
const notes: number[] = [];

// an external estimator script may hook itself in for webcam mode
declare global {
  interface Window {
    poseEstimator?: () => KeypointTriplet[] | null;
  }
}

stage.addEventListener("pointermove", (ev) => {
  const rect = stage.getBoundingClientRect();
  pointer.x = (ev.clientX - rect.left) / rect.width;
  pointer.y = (ev.clientY - rect.top) / rect.height;
});

function setStatus(text: string) {
  status.textContent = text;
}

function showBanner(text: string) {
  banner.textContent = text;
  banner.style.display = "block";
}

const NOTE_NAMES = ["C4", "D4", "E4", "G4", "A4"];
const NOTE_COLORS = ["#e4572e", "#f3a712", "#76b041", "#17a398", "#6665dd"];

function drawFigure(pose: Float64Array) {
  const ctx = stage.getContext("2d")!;
  const w = stage.width;
  const h = stage.height;
  ctx.clearRect(0, 0, w, h);
  const px = (i: number) => ((pose[2 * i] + 1) / 2) * w;
  const py = (i: number) => ((pose[2 * i + 1] + 1) / 2) * h;
  // COCO-18 skeleton edges
  const edges = [
    [0, 1], [1, 2], [2, 3], [3, 4], [1, 5], [5, 6], [6, 7],
    [1, 8], [8, 9], [9, 10], [1, 11], [11, 12], [12, 13],
    [0, 14], [0, 15], [14, 16], [15, 17],
  ];
  ctx.strokeStyle = "#2b2d42";
  ctx.lineWidth = 3;
  for (const [a, b] of edges) {
    ctx.beginPath();
    ctx.moveTo(px(a), py(a));
    ctx.lineTo(px(b), py(b));
    ctx.stroke();
  }
  ctx.fillStyle = "#2b2d42";
  for (let i = 0; i < 18; i++) {
    ctx.beginPath();
    ctx.arc(px(i), py(i), 4, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function drawRoll() {
  const ctx = roll.getContext("2d")!;
  const w = roll.width;
  const h = roll.height;
  ctx.clearRect(0, 0, w, h);
  const cols = Math.floor(w / 8);
  const recent = notes.slice(-cols);
  const rowH = h / 5;
  for (let i = 0; i < recent.length; i++) {
    const ord = recent[i];
    ctx.fillStyle = NOTE_COLORS[ord];
    // ordinal 4 (highest pitch) on top
    ctx.fillRect(i * 8, (4 - ord) * rowH + 1, 7, rowH - 2);
  }
}

function onNote(msg: NoteMsg) {
  player.playNote(msg.midi);
  notes.push(msg.ordinal);
  const block = document.createElement("span");
  block.className = "note-block";
  block.style.background = NOTE_COLORS[msg.ordinal];
  block.textContent = NOTE_NAMES[msg.ordinal];
  lane.appendChild(block);
  while (lane.childNodes.length > 24) lane.removeChild(lane.firstChild!);
  drawRoll();
  setStatus(`note ${msg.index + 1}: ${NOTE_NAMES[msg.ordinal]} (midi ${msg.midi})`);
}

function stopLoop() {
  if (loop !== null) clearInterval(loop);
  loop = null;
}

function start() {
  banner.style.display = "none";
  summaryEl.textContent = "";
  notes.length = 0;
  lane.textContent = "";
  player.unlock();

  if (mode === "webcam-pose") {
    if (window.poseEstimator) {
      capture = new WebcamCapture(window.poseEstimator, stage.width, stage.height);
    } else {
      showBanner("no in-browser pose estimator registered; using the virtual dancer");
      capture = pointer;
    }
  }

  const socket = new WebSocket(`${serverUrl}/v1/session`);
  client = new SessionClient(
    socket,
    {
      onReady: (msg) => {
        setStatus(`session ${msg.session_id}: move the pointer to dance`);
        loop = setInterval(() => {
          const pose = capture.tick();
          drawFigure(pose);
          client?.sendPose(pose);
        }, 1000 / FPS);
      },
      onNote,
      onSummary: (msg) => {
        stopLoop();
        const bars = msg.notes.map((n) => NOTE_NAMES[n]).join(" ");
        summaryEl.textContent =
          `${msg.notes.length} notes, dance/music correlation ` +
          `${msg.correlation.toFixed(4)}\n${bars}`;
        setStatus("session complete");
      },
      onError: (message) => {
        stopLoop();
        showBanner(`server error: ${message}`);
        setStatus("failed");
      },
      onClose: () => {
        stopLoop();
        if (client?.state !== "failed") setStatus("disconnected");
      },
    },
    1000 / FPS - 5, // hard cap: at most fps frames per second on the wire
  );
  setStatus(`connecting to ${serverUrl} (${mode})`);
}

startBtn.addEventListener("click", start);
stopBtn.addEventListener("click", () => client?.end());

setStatus(`ready; server ${serverUrl}, mode ${mode}`);
console.log(`pentatonic scale: ${PENTATONIC_MIDI.join(" ")}`);
