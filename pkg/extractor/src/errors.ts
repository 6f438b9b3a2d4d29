export class DecodeError extends Error {
  constructor(message: string) {
    super(message)
    this.name = 'DecodeError'
  }
}

export class IoError extends Error {
  constructor(message: string) {
    super(message)
    this.name = 'IoError'
  }
}
