/** Voice and earcon playback plus the always-on caption log.
 *
 * Every server message becomes a caption line whether or not audio is
 * available, which doubles as the accessibility fallback and a debugging
 * transcript. Speak messages honor the interrupt flag by cancelling the
 * utterance in flight; earcons are three short distinct tones.
 */

import { ServerMessage } from './protocol.js';

export interface SpeechBackend {
  speak(text: string): void;
  cancel(): void;
}

export interface ToneBackend {
  tone(frequencyHz: number, durationMs: number): void;
}

export const EARCON_TONES_HZ = { activate: 880, confirm: 660, error: 220 } as const;

export function webSpeechBackend(): SpeechBackend | null {
  if (typeof window === 'undefined' || !('speechSynthesis' in window)) return null;
  const synth = window.speechSynthesis;
  return {
    speak(text: string) {
      synth.speak(new SpeechSynthesisUtterance(text));
    },
    cancel() {
      synth.cancel();
    },
  };
}

export function webAudioBackend(): ToneBackend | null {
  if (typeof window === 'undefined' || !('AudioContext' in window)) return null;
  let ctx: AudioContext | null = null;
  return {
    tone(frequencyHz: number, durationMs: number) {
      ctx = ctx ?? new AudioContext();
      const osc = ctx.createOscillator();
      const gain = ctx.createGain();
      osc.frequency.value = frequencyHz;
      gain.gain.value = 0.15;
      osc.connect(gain).connect(ctx.destination);
      osc.start();
      osc.stop(ctx.currentTime + durationMs / 1000);
    },
  };
}

export class Announcer {
  private warnedNoSpeech = false;

  constructor(
    private caption: (line: string) => void,
    private speech: SpeechBackend | null,
    private tones: ToneBackend | null,
  ) {}

  handle(msg: ServerMessage): void {
    switch (msg.type) {
      case 'speak': {
        this.caption(`speak [${msg.priority}] ${msg.text}`);
        if (this.speech === null) {
          if (!this.warnedNoSpeech) {
            this.warnedNoSpeech = true;
            this.caption('warning: speech synthesis unavailable, captions only');
          }
          return;
        }
        if (msg.interrupt) this.speech.cancel();
        this.speech.speak(msg.text);
        return;
      }
      case 'earcon': {
        this.caption(`earcon ${msg.kind}`);
        this.tones?.tone(EARCON_TONES_HZ[msg.kind], 120);
        return;
      }
      case 'map_loaded':
        this.caption(`map loaded: ${msg.elements} elements`);
        return;
      case 'gesture':
        this.caption(`gesture ${msg.kind}${msg.element_id ? ` on ${msg.element_id}` : ''}`);
        return;
      case 'error':
        this.caption(`error ${msg.code}: ${msg.message}`);
        return;
    }
  }
}
