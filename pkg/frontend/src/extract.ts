/**
 * In-page DOM walker that emits snapshot JSON for the groundkit pipeline.
 *
 * The script is self-contained by design: a driver evaluates it in a loaded
 * page and reads the string returned by extract_page (or calls the global
 * hook it installs). Bounding boxes are reported in canvas pixel space,
 * i.e. client rects shifted by the current scroll offset.
 */

export interface ExtractionConfig {
  max_elements: number;
  include_offscreen: boolean;
  viewport_profile: "desktop" | "mobile";
}

export interface BBox {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface ElementOut {
  id: string;
  tag: string;
  bbox: BBox;
  visible: boolean;
  attributes: Record<string, string>;
  input_type?: string;
}

export interface SnapshotOut {
  snapshot_id: string;
  url: string;
  screenshot_ref: string;
  viewport: { width: number; height: number };
  canvas: { width: number; height: number };
  elements: ElementOut[];
}

// Tag sets mirror the consumer's classifier; anything else is skipped.
const INTERACTIVE_TAGS = new Set([
  "a", "img", "button", "input", "svg", "select", "textarea", "video",
]);
const PURE_TEXT_TAGS = new Set([
  "p", "h1", "h2", "h3", "h4", "h5", "h6", "span", "li", "td", "label",
]);

// Only these attribute keys survive; everything else is noise downstream.
// inner_text is carried as an attribute too, computed from textContent.
const SALIENT_MARKUP_ATTRIBUTES = [
  "alt", "title", "aria-label", "aria-describedby", "placeholder", "value",
] as const;

const VIEWPORT_PRESETS: Record<"desktop" | "mobile", { width: number; height: number }> = {
  desktop: { width: 1280, height: 800 },
  mobile: { width: 512, height: 864 },
};

export const DEFAULT_CONFIG: ExtractionConfig = {
  max_elements: 100,
  include_offscreen: true,
  viewport_profile: "desktop",
};

function collapseWhitespace(text: string): string {
  return text.replace(/\s+/g, " ").trim();
}

function isRendered(el: Element, win: Window): boolean {
  const style = win.getComputedStyle(el);
  if (style.display === "none" || style.visibility === "hidden") return false;
  // display:none on an ancestor collapses the rect, so a zero-area check
  // below catches it even when getComputedStyle is not inherited-aware.
  return true;
}

function intersects(b: BBox, width: number, height: number): boolean {
  return b.x < width && b.y < height && b.x + b.w > 0 && b.y + b.h > 0;
}

/**
 * Walk the document and return the snapshot as a JSON string.
 *
 * Detached and zero-area elements are skipped silently. Elements are
 * emitted in document order with ids e0001, e0002, ... and the walk stops
 * once max_elements have been collected.
 */
export function extract_page(
  config: ExtractionConfig = DEFAULT_CONFIG,
  doc?: Document,
): string {
  if (!Number.isInteger(config.max_elements) || config.max_elements <= 0) {
    throw new Error(`max_elements must be a positive integer, got ${config.max_elements}`);
  }
  if (!(config.viewport_profile in VIEWPORT_PRESETS)) {
    throw new Error(`unknown viewport_profile: ${config.viewport_profile}`);
  }
  const d = doc ?? document;
  const win = d.defaultView;
  if (!win) throw new Error("document has no window; run inside a page");

  // The profile is the contract with the driver: the page is rendered and
  // screenshotted at this size, so the snapshot records it verbatim
  // instead of trusting whatever the embedder claims the window is.
  const viewport = { ...VIEWPORT_PRESETS[config.viewport_profile] };
  const scrollX = win.scrollX || 0;
  const scrollY = win.scrollY || 0;

  const selector = [...INTERACTIVE_TAGS, ...PURE_TEXT_TAGS].join(",");
  const elements: ElementOut[] = [];
  let maxBottom = 0;

  for (const el of Array.from(d.querySelectorAll(selector))) {
    if (elements.length >= config.max_elements) break;
    if (!el.isConnected) continue;
    const tag = el.tagName.toLowerCase();
    if (!INTERACTIVE_TAGS.has(tag) && !PURE_TEXT_TAGS.has(tag)) continue;
    if (!isRendered(el, win)) continue;

    const rect = el.getBoundingClientRect();
    if (rect.width <= 0 || rect.height <= 0) continue;

    // Canvas space: client rect plus scroll offset, snapped to integers.
    // The canvas is exactly viewport wide, so horizontal overflow clips;
    // what a screenshot cannot show, a grounding target cannot use.
    let x = Math.round(rect.left + scrollX);
    let y = Math.round(rect.top + scrollY);
    let right = Math.round(rect.right + scrollX);
    let bottom = Math.round(rect.bottom + scrollY);
    if (x < 0) x = 0;
    if (y < 0) y = 0;
    if (right > viewport.width) right = viewport.width;
    if (right <= x || bottom <= y) continue;
    const bbox: BBox = { x, y, w: right - x, h: bottom - y };

    if (!config.include_offscreen) {
      const inView: BBox = {
        x: bbox.x - scrollX,
        y: bbox.y - scrollY,
        w: bbox.w,
        h: bbox.h,
      };
      if (!intersects(inView, viewport.width, viewport.height)) continue;
    }

    const attributes: Record<string, string> = {};
    const text = collapseWhitespace(el.textContent ?? "");
    if (text !== "") attributes["inner_text"] = text;
    for (const name of SALIENT_MARKUP_ATTRIBUTES) {
      const value = el.getAttribute(name);
      if (value !== null && value !== "") attributes[name] = value;
    }

    const out: ElementOut = {
      id: `e${String(elements.length + 1).padStart(4, "0")}`,
      tag,
      bbox,
      visible: true,
      attributes,
    };
    if (tag === "input") {
      out.input_type = (el.getAttribute("type") ?? "text").toLowerCase();
    }
    elements.push(out);
    if (bottom > maxBottom) maxBottom = bottom;
  }

  const root = d.documentElement;
  // Canvas width equals viewport width by contract; height covers the
  // whole scrollable page plus anything positioned past it.
  const canvas = {
    width: viewport.width,
    height: Math.max(viewport.height, root ? root.scrollHeight : 0, maxBottom),
  };

  const sid = snapshotIdFor(win);
  const snapshot: SnapshotOut = {
    snapshot_id: sid,
    url: win.location?.href ?? "about:blank",
    screenshot_ref: sid + ".png",
    viewport,
    canvas,
    elements,
  };
  return JSON.stringify(snapshot);
}

// Stable id from the page location; pages without a usable URL get a
// counter so repeated captures in one session stay distinct.
let anonCounter = 0;
function snapshotIdFor(win: Window): string {
  const href = win.location?.href ?? "";
  if (href && href !== "about:blank") {
    let hash = 0;
    for (let i = 0; i < href.length; i++) {
      hash = (hash * 31 + href.charCodeAt(i)) >>> 0;
    }
    return "w" + hash.toString(16).padStart(8, "0");
  }
  anonCounter += 1;
  return "anon" + String(anonCounter).padStart(4, "0");
}

declare global {
  interface Window {
    __groundkit_extract?: (config?: Partial<ExtractionConfig>) => string;
  }
}

if (typeof window !== "undefined") {
  window.__groundkit_extract = (config?: Partial<ExtractionConfig>) =>
    extract_page({ ...DEFAULT_CONFIG, ...config });
}
