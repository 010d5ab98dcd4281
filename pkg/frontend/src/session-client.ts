/** One live connection to the session service, with a UI-side capture log.
 *
 * The session clock starts when the connection opens, so every outbound
 * message carries a valid monotone elapsed-ms timestamp. The capture buffer
 * uses the same JSON Lines record shape the service writes, so a downloaded
 * capture feeds straight into the study harness.
 */

import { ClientMessage, ServerMessage, encode, parseServerMessage } from './protocol.js';

export interface SocketLike {
  send(data: string): void;
  close(): void;
}

export interface LogRecord {
  dir: 'in' | 'out';
  t_ms: number;
  msg: ClientMessage | ServerMessage;
  cause_seq?: number;
}

export interface SessionHooks {
  now(): number;
  onServerMessage(msg: ServerMessage): void;
  onStatus(connected: boolean, note: string): void;
}

export class UiSession {
  blindfold = false;
  selectedLevel = 1;
  readonly records: LogRecord[] = [];

  private socket: SocketLike | null = null;
  private clockOrigin: number | null = null;
  private lastT = 0;
  private lastInIndex = 0;

  constructor(private hooks: SessionHooks) {}

  get connected(): boolean {
    return this.socket !== null;
  }

  /** Monotone milliseconds since the connection opened. */
  elapsedMs(): number {
    if (this.clockOrigin === null) return 0;
    const t = Math.max(Math.round(this.hooks.now() - this.clockOrigin), this.lastT);
    return t;
  }

  attach(socket: SocketLike): void {
    this.socket = socket;
    if (this.clockOrigin === null) this.clockOrigin = this.hooks.now();
    this.hooks.onStatus(true, 'connected');
  }

  detach(): void {
    this.socket = null;
    this.hooks.onStatus(false, 'disconnected');
  }

  /** Send one protocol message; dropped (with an indicator) while offline. */
  send(message: ClientMessage): boolean {
    if (this.socket === null) {
      this.hooks.onStatus(false, 'disconnected: message dropped');
      return false;
    }
    const t = message.type === 'touch' ? message.t_ms : this.lastT;
    if (message.type === 'touch') this.lastT = message.t_ms;
    this.lastInIndex = this.records.length;
    this.records.push({ dir: 'in', t_ms: t, msg: message });
    this.socket.send(encode(message));
    return true;
  }

  selectLevel(level: number): boolean {
    this.selectedLevel = level;
    return this.send({ type: 'select_level', level });
  }

  receiveFrame(frame: string): void {
    const msg = parseServerMessage(frame);
    if (msg === null) return;
    this.records.push({ dir: 'out', t_ms: this.lastT, msg, cause_seq: this.lastInIndex });
    this.hooks.onServerMessage(msg);
  }

  /** Capture buffer as JSON Lines, the service's log format. */
  exportLog(): string {
    return this.records
      .map((r) =>
        JSON.stringify(
          r.cause_seq === undefined
            ? { dir: r.dir, t_ms: r.t_ms, msg: r.msg }
            : { dir: r.dir, t_ms: r.t_ms, msg: r.msg, cause_seq: r.cause_seq },
        ),
      )
      .join('\n');
  }
}
