/** WAV playback through a single shared audio element. */

export class Player {
  private audio = new Audio();
  private objectUrl: string | null = null;

  play(wav: ArrayBuffer): Promise<void> {
    if (this.objectUrl) URL.revokeObjectURL(this.objectUrl);
    const blob = new Blob([wav], { type: "audio/wav" });
    this.objectUrl = URL.createObjectURL(blob);
    this.audio.src = this.objectUrl;
    return this.audio.play();
  }

  stop(): void {
    this.audio.pause();
    this.audio.currentTime = 0;
  }
}
