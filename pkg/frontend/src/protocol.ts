/** Wire schema shared with the session service. One JSON object per frame. */

export type TouchPhase = 'down' | 'move' | 'up';

export type ClientMessage =
  | { type: 'load_map'; map_id: string }
  | { type: 'load_map'; svg: string }
  | { type: 'touch'; phase: TouchPhase; touch_id: number; x: number; y: number; t_ms: number }
  | { type: 'select_level'; level: number }
  | { type: 'end_session' };

export type ServerMessage =
  | { type: 'map_loaded'; elements: number }
  | { type: 'speak'; text: string; priority: 'info' | 'detail' | 'alert'; interrupt: boolean }
  | { type: 'earcon'; kind: 'activate' | 'confirm' | 'error' }
  | { type: 'gesture'; kind: string; element_id: string | null }
  | { type: 'error'; code: string; message: string };

export function parseServerMessage(frame: string): ServerMessage | null {
  let raw: unknown;
  try {
    raw = JSON.parse(frame);
  } catch {
    return null;
  }
  if (typeof raw !== 'object' || raw === null) return null;
  const type = (raw as { type?: unknown }).type;
  if (
    type === 'map_loaded' ||
    type === 'speak' ||
    type === 'earcon' ||
    type === 'gesture' ||
    type === 'error'
  ) {
    return raw as ServerMessage;
  }
  return null;
}

export function encode(message: ClientMessage): string {
  return JSON.stringify(message);
}
