/** Pointer/touch events to protocol touch messages, in map millimeters.
 *
 * Guarantees on the outbound stream: t_ms is monotone, every move/up has a
 * preceding down with the same touch_id, concurrent contacts keep distinct
 * ids, and per-contact moves are throttled to one per interval (33 ms
 * keeps the stream at roughly 30 Hz).
 */

import { ClientMessage } from './protocol.js';

export interface PointerSample {
  kind: 'down' | 'move' | 'up';
  pointerId: number;
  /** canvas pixel coordinates */
  x: number;
  y: number;
  timeMs: number;
}

export interface CanvasMapping {
  pxPerMm: number;
  widthMm: number;
  heightMm: number;
}

const MOVE_INTERVAL_MS = 33;

export class TouchTranslator {
  private touchIds = new Map<number, number>();
  private nextTouchId = 0;
  private lastMoveSent = new Map<number, number>();
  private lastPosition = new Map<number, { x: number; y: number }>();
  private lastT = 0;

  constructor(
    private mapping: CanvasMapping,
    private emit: (msg: ClientMessage) => void,
    private moveIntervalMs: number = MOVE_INTERVAL_MS,
  ) {}

  setMapping(mapping: CanvasMapping): void {
    this.mapping = mapping;
  }

  get liveContacts(): number {
    return this.touchIds.size;
  }

  /** Keepalive: re-send each resting contact's position so the service's
   * client-authoritative clock advances and holds can mature while the
   * finger stays put. Respects the per-contact move throttle. */
  tick(timeMs: number): void {
    const t = this.clock(timeMs);
    for (const touchId of this.touchIds.values()) {
      const pos = this.lastPosition.get(touchId);
      if (!pos) continue;
      const last = this.lastMoveSent.get(touchId) ?? 0;
      if (t - last < this.moveIntervalMs) continue;
      this.lastMoveSent.set(touchId, t);
      this.send('move', touchId, { kind: 'move', pointerId: -1, x: pos.x, y: pos.y, timeMs: t }, t);
    }
  }

  handle(sample: PointerSample): void {
    const t = this.clock(sample.timeMs);
    if (sample.kind === 'down') {
      if (this.touchIds.has(sample.pointerId)) return; // duplicate down: ignore
      const touchId = this.nextTouchId++;
      this.touchIds.set(sample.pointerId, touchId);
      this.lastMoveSent.set(touchId, t);
      this.lastPosition.set(touchId, { x: sample.x, y: sample.y });
      this.send('down', touchId, sample, t);
      return;
    }
    const touchId = this.touchIds.get(sample.pointerId);
    if (touchId === undefined) return; // hover or stray event without a down
    if (sample.kind === 'move') {
      this.lastPosition.set(touchId, { x: sample.x, y: sample.y });
      const last = this.lastMoveSent.get(touchId) ?? 0;
      if (t - last < this.moveIntervalMs) return;
      this.lastMoveSent.set(touchId, t);
      this.send('move', touchId, sample, t);
      return;
    }
    this.touchIds.delete(sample.pointerId);
    this.lastMoveSent.delete(touchId);
    this.lastPosition.delete(touchId);
    this.send('up', touchId, sample, t);
  }

  private clock(timeMs: number): number {
    const t = Math.max(Math.round(timeMs), this.lastT);
    this.lastT = t;
    return t;
  }

  private send(phase: 'down' | 'move' | 'up', touchId: number, sample: PointerSample, t: number): void {
    const clamp = (v: number, hi: number) => Math.min(Math.max(v, 0), hi);
    this.emit({
      type: 'touch',
      phase,
      touch_id: touchId,
      x: clamp(sample.x / this.mapping.pxPerMm, this.mapping.widthMm),
      y: clamp(sample.y / this.mapping.pxPerMm, this.mapping.heightMm),
      t_ms: t,
    });
  }
}
