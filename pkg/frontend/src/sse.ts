/** Incremental server-sent-events parser.
 *
 * Feed it decoded text chunks in any split; it returns the frames completed
 * so far. Follows the SSE wire format: frames end at a blank line, fields
 * are `name: value` with one optional space after the colon, multiple
 * `data:` lines join with newlines, and lines starting with `:` are
 * comments (the service uses them as keepalives).
 */

export interface SseFrame {
  /** Last `id:` field of the frame, or null when the frame had none. */
  id: string | null;
  /** `event:` field; the SSE default is "message". */
  event: string;
  /** Joined `data:` payload. */
  data: string;
}

export class SseParser {
  private buffer = "";
  /** Comment lines seen (keepalives); useful for liveness display. */
  commentCount = 0;

  /** Consume one chunk; returns every frame completed by it. */
  push(chunk: string): SseFrame[] {
    this.buffer += chunk;
    const frames: SseFrame[] = [];
    // A frame ends at an empty line; tolerate \r\n line endings.
    for (;;) {
      const match = /\r?\n\r?\n/.exec(this.buffer);
      if (match === null) break;
      const separator = match[0] ?? "";
      const raw = this.buffer.slice(0, match.index);
      this.buffer = this.buffer.slice(match.index + separator.length);
      const frame = this.parseFrame(raw);
      if (frame !== null) frames.push(frame);
    }
    return frames;
  }

  private parseFrame(raw: string): SseFrame | null {
    let id: string | null = null;
    let event = "message";
    const data: string[] = [];
    let sawField = false;
    for (const line of raw.split(/\r?\n/)) {
      if (line === "") continue;
      if (line.startsWith(":")) {
        this.commentCount += 1;
        continue;
      }
      sawField = true;
      const colon = line.indexOf(":");
      const name = colon === -1 ? line : line.slice(0, colon);
      let value = colon === -1 ? "" : line.slice(colon + 1);
      if (value.startsWith(" ")) value = value.slice(1);
      if (name === "id") id = value;
      else if (name === "event") event = value;
      else if (name === "data") data.push(value);
      // Unknown fields are ignored per the SSE spec.
    }
    if (!sawField) return null; // comment-only keepalive frame
    return { id, event, data: data.join("\n") };
  }
}
