/** Browser wiring: canvas, pointer capture, WebSocket, audio, menus. */

import { Announcer, webAudioBackend, webSpeechBackend } from './audio.js';
import { buildLevelMenu } from './level-menu.js';
import { MapModel, parseMapText, renderMap } from './map-render.js';
import { ClientMessage } from './protocol.js';
import { UiSession } from './session-client.js';
import { PointerSample, TouchTranslator } from './touch-input.js';

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
};

const canvas = $<HTMLCanvasElement>('map-canvas');
const ctx = canvas.getContext('2d')!;
const captions = $<HTMLUListElement>('captions');
const status = $<HTMLSpanElement>('status');

let model: MapModel | null = null;
let mapText: string | null = null;
let pxPerMm = 2;

function caption(line: string): void {
  const item = document.createElement('li');
  item.textContent = line;
  captions.appendChild(item);
  captions.scrollTop = captions.scrollHeight;
}

const announcer = new Announcer(caption, webSpeechBackend(), webAudioBackend());

const session = new UiSession({
  now: () => performance.now(),
  onServerMessage: (msg) => announcer.handle(msg),
  onStatus: (connected, note) => {
    status.textContent = note;
    status.className = connected ? 'ok' : 'bad';
  },
});

const translator = new TouchTranslator({ pxPerMm, widthMm: 420, heightMm: 297 }, (msg: ClientMessage) =>
  session.send(msg),
);

function redraw(): void {
  if (model) {
    pxPerMm = Math.min(canvas.width / model.widthMm, canvas.height / model.heightMm);
    translator.setMapping({ pxPerMm, widthMm: model.widthMm, heightMm: model.heightMm });
  }
  renderMap(ctx, model, { pxPerMm, blindfold: session.blindfold });
  menu.setActive(session.selectedLevel); // level selection survives re-renders
}

function loadMapText(text: string): void {
  try {
    model = parseMapText(text);
    mapText = text;
  } catch (err) {
    caption(`render error: ${err}`);
    return;
  }
  if (session.connected) session.send({ type: 'load_map', svg: text });
  redraw();
}

// -- pointer capture -------------------------------------------------------

function toSample(kind: 'down' | 'move' | 'up', ev: PointerEvent): PointerSample {
  const rect = canvas.getBoundingClientRect();
  return {
    kind,
    pointerId: ev.pointerId,
    x: ((ev.clientX - rect.left) / rect.width) * canvas.width,
    y: ((ev.clientY - rect.top) / rect.height) * canvas.height,
    timeMs: session.elapsedMs(),
  };
}

canvas.addEventListener('pointerdown', (ev) => {
  ev.preventDefault();
  canvas.setPointerCapture(ev.pointerId);
  translator.handle(toSample('down', ev));
});
canvas.addEventListener('pointermove', (ev) => {
  if (ev.buttons === 0 && ev.pointerType === 'mouse') return;
  translator.handle(toSample('move', ev));
});
for (const type of ['pointerup', 'pointercancel'] as const) {
  canvas.addEventListener(type, (ev) => translator.handle(toSample('up', ev)));
}

// Resting fingers send keepalive moves so tap-and-hold matures on the
// service's client-authoritative clock even without pointer movement.
setInterval(() => {
  if (session.connected && translator.liveContacts > 0) {
    translator.tick(session.elapsedMs());
  }
}, 250);

// -- controls --------------------------------------------------------------

const menu = buildLevelMenu($('level-menu'), [0, 1, 2, 3, 4], session.selectedLevel, (level) => {
  session.selectLevel(level);
});

$<HTMLInputElement>('blindfold').addEventListener('change', (ev) => {
  session.blindfold = (ev.target as HTMLInputElement).checked;
  redraw(); // rendering only; outbound events are untouched
});

$<HTMLButtonElement>('connect').addEventListener('click', () => {
  const url = $<HTMLInputElement>('service-url').value;
  const ws = new WebSocket(url);
  ws.onopen = () => {
    session.attach({ send: (d) => ws.send(d), close: () => ws.close() });
    if (mapText) session.send({ type: 'load_map', svg: mapText });
  };
  ws.onmessage = (ev) => session.receiveFrame(String(ev.data));
  ws.onclose = () => session.detach();
  ws.onerror = () => caption('websocket error');
});

$<HTMLButtonElement>('end-session').addEventListener('click', () => {
  session.send({ type: 'end_session' });
});

$<HTMLButtonElement>('download-log').addEventListener('click', () => {
  const blob = new Blob([session.exportLog()], { type: 'application/jsonl' });
  const link = document.createElement('a');
  link.href = URL.createObjectURL(blob);
  link.download = 'ui-capture.jsonl';
  link.click();
  URL.revokeObjectURL(link.href);
});

$<HTMLInputElement>('map-file').addEventListener('change', async (ev) => {
  const file = (ev.target as HTMLInputElement).files?.[0];
  if (file) loadMapText(await file.text());
});

fetch('public/fixture-map.svg')
  .then((res) => (res.ok ? res.text() : Promise.reject(new Error(String(res.status)))))
  .then(loadMapText)
  .catch(() => caption('fixture map not found; pick a map file'));

redraw();
