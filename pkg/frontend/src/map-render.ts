/** Parse profile SVG text and draw it on a canvas.
 *
 * The UI renders from the same SVG text it submits to the service with
 * load_map, so no extra endpoint is needed to fetch geometry. In blindfold
 * mode nothing is drawn at all while touch capture keeps running.
 */

export type ElementKind = 'street' | 'building' | 'poi' | 'water';

export interface MapShape {
  id: string;
  kind: ElementKind;
  name: string;
  /** polyline/ring vertices in mm, or a single point for POIs */
  points: Array<[number, number]>;
  closed: boolean;
}

export interface MapModel {
  widthMm: number;
  heightMm: number;
  scaleMPerMm: number;
  title: string;
  shapes: MapShape[];
}

const KINDS: ReadonlySet<string> = new Set(['street', 'building', 'poi', 'water']);

function parseLength(raw: string | null, fallback: number): number {
  if (!raw) return fallback;
  const value = parseFloat(raw.replace(/mm$/, ''));
  return Number.isFinite(value) && value > 0 ? value : fallback;
}

function parsePathPoints(d: string): { points: Array<[number, number]>; closed: boolean } {
  const tokens = d.match(/[MmLlHhVvZz]|[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?/g) ?? [];
  const points: Array<[number, number]> = [];
  let closed = false;
  let cx = 0;
  let cy = 0;
  let cmd = '';
  let i = 0;
  const next = () => parseFloat(tokens[i++] ?? '0');
  while (i < tokens.length) {
    const tok = tokens[i]!;
    if (/[A-Za-z]/.test(tok)) {
      cmd = tok;
      i++;
      if (cmd === 'Z' || cmd === 'z') {
        closed = true;
        continue;
      }
    }
    switch (cmd) {
      case 'M':
      case 'L': {
        cx = next();
        cy = next();
        break;
      }
      case 'm':
      case 'l': {
        const dx = next();
        const dy = next();
        if (points.length === 0) {
          // the first moveto is absolute even when written relative
          cx = dx;
          cy = dy;
        } else {
          cx += dx;
          cy += dy;
        }
        break;
      }
      case 'H':
        cx = next();
        break;
      case 'h':
        cx += next();
        break;
      case 'V':
        cy = next();
        break;
      case 'v':
        cy += next();
        break;
      default:
        return { points: [], closed: false }; // outside the profile
    }
    points.push([cx, cy]);
    if (cmd === 'M') cmd = 'L';
    if (cmd === 'm') cmd = 'l';
  }
  if (closed && points.length > 1) {
    const first = points[0]!;
    const last = points[points.length - 1]!;
    if (first[0] === last[0] && first[1] === last[1]) points.pop();
  }
  return { points, closed };
}

/** Parse profile SVG text; silently skips anything outside the profile. */
export function parseMapText(svgText: string): MapModel {
  const doc = new DOMParser().parseFromString(svgText, 'image/svg+xml');
  const root = doc.documentElement;
  if (!root || root.nodeName !== 'svg') {
    throw new Error('not an SVG document');
  }
  const model: MapModel = {
    widthMm: parseLength(root.getAttribute('width'), 420),
    heightMm: parseLength(root.getAttribute('height'), 297),
    scaleMPerMm: parseFloat(root.getAttribute('data-scale-m-per-mm') ?? '1') || 1,
    title: root.getAttribute('data-title') ?? '',
    shapes: [],
  };
  for (const node of Array.from(root.querySelectorAll('[data-kind]'))) {
    const kind = node.getAttribute('data-kind') ?? '';
    if (!KINDS.has(kind)) continue;
    const id = node.getAttribute('data-id') ?? '';
    const name = node.getAttribute('data-name') ?? '';
    if (node.nodeName === 'circle') {
      const x = parseFloat(node.getAttribute('cx') ?? '0');
      const y = parseFloat(node.getAttribute('cy') ?? '0');
      model.shapes.push({ id, kind: kind as ElementKind, name, points: [[x, y]], closed: false });
    } else if (node.nodeName === 'path') {
      const { points, closed } = parsePathPoints(node.getAttribute('d') ?? '');
      if (points.length >= 2) {
        model.shapes.push({ id, kind: kind as ElementKind, name, points, closed });
      }
    }
  }
  return model;
}

const STYLE: Record<ElementKind, { stroke: string; fill: string | null; width: number }> = {
  street: { stroke: '#2b2b2b', fill: null, width: 1.2 },
  building: { stroke: '#5c4a32', fill: '#d9d0c1', width: 0.5 },
  water: { stroke: '#3182bd', fill: '#9ecae1', width: 0.5 },
  poi: { stroke: '#7f1d1d', fill: '#d62728', width: 0.4 },
};

export interface RenderOptions {
  pxPerMm: number;
  blindfold: boolean;
}

/** Draw the model; returns the number of shapes drawn (0 under blindfold). */
export function renderMap(
  ctx: CanvasRenderingContext2D,
  model: MapModel | null,
  opts: RenderOptions,
): number {
  const w = (model?.widthMm ?? 420) * opts.pxPerMm;
  const h = (model?.heightMm ?? 297) * opts.pxPerMm;
  ctx.clearRect(0, 0, w, h);
  ctx.fillStyle = opts.blindfold ? '#111111' : '#fbf7ef';
  ctx.fillRect(0, 0, w, h);
  if (model === null || opts.blindfold) return 0;

  const s = opts.pxPerMm;
  let drawn = 0;
  const order: ElementKind[] = ['water', 'building', 'street', 'poi'];
  for (const kind of order) {
    for (const shape of model.shapes) {
      if (shape.kind !== kind) continue;
      const style = STYLE[shape.kind];
      ctx.strokeStyle = style.stroke;
      ctx.lineWidth = style.width * s;
      if (shape.kind === 'poi') {
        const [p] = shape.points;
        if (!p) continue;
        ctx.beginPath();
        ctx.arc(p[0] * s, p[1] * s, 2.5 * s, 0, Math.PI * 2);
        ctx.fillStyle = style.fill!;
        ctx.fill();
        ctx.stroke();
        ctx.fillStyle = '#333333';
        ctx.font = `${10}px sans-serif`;
        ctx.fillText(shape.name, p[0] * s + 4 * s, p[1] * s - 3 * s);
      } else {
        ctx.beginPath();
        shape.points.forEach(([x, y], idx) => {
          if (idx === 0) ctx.moveTo(x * s, y * s);
          else ctx.lineTo(x * s, y * s);
        });
        if (shape.closed) {
          ctx.closePath();
          ctx.fillStyle = style.fill!;
          ctx.fill();
        }
        ctx.stroke();
      }
      drawn++;
    }
  }
  return drawn;
}
