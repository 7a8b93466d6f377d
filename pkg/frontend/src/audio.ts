// Client-side sonification: the wire carries note events, the page makes the
// sound. One short oscillator tone per note, started immediately on arrival.

export function midiToFreq(midi: number): number {
  return 440 * Math.pow(2, (midi - 69) / 12);
}

export class NotePlayer {
  private ctx: AudioContext | null = null;

  constructor(private createCtx: () => AudioContext = () => new AudioContext()) {}

  /** Lazily create the context; must be called from a user gesture once. */
  unlock(): void {
    if (!this.ctx) this.ctx = this.createCtx();
    if (this.ctx.state === "suspended") void this.ctx.resume();
  }

  playNote(midi: number, durationS = 0.2): void {
    this.unlock();
    const ctx = this.ctx!;
    const t0 = ctx.currentTime;
    const osc = ctx.createOscillator();
    const gain = ctx.createGain();
    osc.type = "triangle";
    osc.frequency.value = midiToFreq(midi);
    // short attack so back-to-back notes do not click
    gain.gain.setValueAtTime(0, t0);
    gain.gain.linearRampToValueAtTime(0.28, t0 + 0.012);
    gain.gain.linearRampToValueAtTime(0, t0 + durationS);
    osc.connect(gain);
    gain.connect(ctx.destination);
    osc.start(t0);
    osc.stop(t0 + durationS + 0.05);
    osc.onended = () => {
      osc.disconnect();
      gain.disconnect();
    };
  }
}
